// Copyright 2026 The seizeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "seizeval/score.hpp"

#include "seizeval/error.hpp"
#include "seizeval/text.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>

namespace seizeval {

namespace {

constexpr const char* kModule = "cli";

using FileKey = std::pair<std::string, std::string>;

std::map<FileKey, std::vector<Event>> group_events(std::span<const Annotation> rows)
{
    std::map<FileKey, std::vector<Event>> out;
    for (const auto& a : rows)
        if (a.event.label() == kSeizure) out[{a.subject, a.file}].push_back(a.event);
    for (auto& [key, events] : out)
        std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.start() < b.start(); });
    return out;
}

std::string describe(const FileKey& k) { return k.first + "/" + k.second; }

LabelSeries render(const std::vector<Event>& events, double fs, double duration_s, const FileKey& key,
                   const char* which)
{
    for (const auto& e : events)
        if (e.start() < 0.0 || e.end() > duration_s + 1e-9)
            fail(ErrorKind::alignment, kModule,
                 std::string(which) + " event [" + format_double(e.start()) + ", " + format_double(e.end()) +
                     ") in " + describe(key) + " lies outside the file span [0, " + format_double(duration_s) + ")");
    // Overlapping annotation rows are merged rather than rejected.
    std::vector<Label> labels(static_cast<std::size_t>(std::llround(duration_s * fs)), kBackground);
    for (const auto& e : events) {
        const auto single = events_to_labels(std::span(&e, 1), fs, duration_s);
        for (std::size_t i = 0; i < labels.size(); ++i) labels[i] |= single[i];
    }
    return LabelSeries(std::move(labels), fs);
}

ScoreReport aggregate_files(const std::vector<FoldCounts>& counts, Aggregation mode)
{
    if (counts.empty()) fail(ErrorKind::alignment, kModule, "nothing to score: no files");
    return aggregate_counts(counts, mode);
}

}  // namespace

std::vector<LabelTrack> read_label_tracks(std::istream& in)
{
    std::vector<LabelTrack> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        if (line_no == 1 && trim(line) == kLabelTrackHeader) continue;
        const auto f = split_csv_line(line);
        const auto fs = f.size() == 4 ? parse_number<double>(trim(f[2])) : std::nullopt;
        if (!fs || !(*fs > 0.0))
            fail(ErrorKind::parse, kModule, "label file line " + std::to_string(line_no) + ": expected " +
                                                kLabelTrackHeader);
        LabelTrack t{trim(f[0]), trim(f[1]), *fs, {}};
        const auto text = trim(f[3]);
        t.labels.reserve(text.size());
        for (char c : text) {
            if (c != '0' && c != '1')
                fail(ErrorKind::parse, kModule, "label file line " + std::to_string(line_no) + ": labels must be 0/1");
            t.labels.push_back(c == '1' ? kSeizure : kBackground);
        }
        out.push_back(std::move(t));
    }
    return out;
}

void write_label_tracks(std::ostream& out, std::span<const LabelTrack> tracks)
{
    out << kLabelTrackHeader << '\n';
    for (const auto& t : tracks) {
        out << t.subject << ',' << t.file << ',' << format_double(t.fs) << ',';
        for (auto l : t.labels) out << (l ? '1' : '0');
        out << '\n';
    }
}

std::vector<FileSpan> read_file_spans(std::istream& in)
{
    std::vector<FileSpan> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        if (line_no == 1 && trim(line) == kFileSpanHeader) continue;
        const auto f = split_csv_line(line);
        const auto d = f.size() == 3 ? parse_number<double>(trim(f[2])) : std::nullopt;
        if (!d || !(*d > 0.0))
            fail(ErrorKind::parse, kModule, "durations line " + std::to_string(line_no) + ": expected " +
                                                kFileSpanHeader);
        out.push_back({trim(f[0]), trim(f[1]), *d});
    }
    return out;
}

ScoreReport score_annotations(std::span<const Annotation> ref, std::span<const Annotation> hyp,
                              std::span<const FileSpan> spans, std::optional<double> default_duration_s, double fs,
                              Aggregation mode)
{
    if (!(fs > 0.0)) fail(ErrorKind::validation, kModule, "fs must be positive");
    const auto ref_events = group_events(ref);
    const auto hyp_events = group_events(hyp);

    std::map<FileKey, double> durations;
    for (const auto& s : spans) durations[{s.subject, s.file}] = s.duration_s;
    if (spans.empty()) {
        if (!default_duration_s || !(*default_duration_s > 0.0))
            fail(ErrorKind::alignment, kModule, "file durations are required (--duration or --durations)");
        for (const auto& [k, _] : ref_events) durations[k] = *default_duration_s;
        for (const auto& [k, _] : hyp_events) durations[k] = *default_duration_s;
    }
    for (const auto* group : {&ref_events, &hyp_events})
        for (const auto& [k, _] : *group)
            if (!durations.count(k))
                fail(ErrorKind::alignment, kModule, "events for " + describe(k) + " but the file has no duration");

    static const std::vector<Event> none;
    std::vector<FoldCounts> counts;
    for (const auto& [key, duration] : durations) {
        const auto r = ref_events.find(key);
        const auto h = hyp_events.find(key);
        const auto ref_series = render(r == ref_events.end() ? none : r->second, fs, duration, key, "reference");
        const auto hyp_series = render(h == hyp_events.end() ? none : h->second, fs, duration, key, "hypothesis");
        counts.push_back(count_file(ref_series, hyp_series));
    }
    return aggregate_files(counts, mode);
}

ScoreReport score_label_tracks(std::span<const Annotation> ref, std::span<const LabelTrack> hyp, Aggregation mode)
{
    const auto ref_events = group_events(ref);
    std::set<FileKey> seen;
    std::vector<FoldCounts> counts;
    static const std::vector<Event> none;
    for (const auto& t : hyp) {
        const FileKey key{t.subject, t.file};
        if (!seen.insert(key).second) fail(ErrorKind::alignment, kModule, "duplicate label track for " + describe(key));
        if (t.labels.empty()) fail(ErrorKind::alignment, kModule, "empty label track for " + describe(key));
        const double duration = static_cast<double>(t.labels.size()) / t.fs;
        const auto r = ref_events.find(key);
        const auto ref_series = render(r == ref_events.end() ? none : r->second, t.fs, duration, key, "reference");
        counts.push_back(count_file(ref_series, LabelSeries(t.labels, t.fs)));
    }
    for (const auto& [k, _] : ref_events)
        if (!seen.count(k)) fail(ErrorKind::alignment, kModule, "no label track covers " + describe(k));
    return aggregate_files(counts, mode);
}

}  // namespace seizeval
