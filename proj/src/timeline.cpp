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

#include "seizeval/timeline.hpp"

#include "seizeval/error.hpp"
#include "seizeval/text.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace seizeval {

namespace {

constexpr const char* kModule = "timeline";

// Slack, in samples, when mapping second-valued boundaries onto the sample grid.
constexpr double kGridSlack = 1e-6;

double parse_seconds(const std::string& text, std::size_t line_no)
{
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value))
        fail(ErrorKind::parse, kModule, "line " + std::to_string(line_no) + ": bad time value '" + text + "'");
    return value;
}

Label parse_label(const std::string& text, std::size_t line_no)
{
    if (text == "1" || text == "seizure" || text == "seiz") return kSeizure;
    if (text == "0" || text == "bckg" || text == "background") return kBackground;
    fail(ErrorKind::parse, kModule, "line " + std::to_string(line_no) + ": bad label '" + text + "'");
}

}  // namespace

LabelSeries::LabelSeries(std::vector<Label> labels, double fs, double origin)
    : labels_(std::move(labels)), fs_(fs), origin_(origin)
{
    if (!(fs_ > 0.0) || !std::isfinite(fs_))
        fail(ErrorKind::validation, kModule, "sampling frequency must be positive, got " + format_double(fs_));
    if (!std::isfinite(origin_)) fail(ErrorKind::validation, kModule, "origin must be finite");
    if (std::any_of(labels_.begin(), labels_.end(), [](Label l) { return l > 1; }))
        fail(ErrorKind::validation, kModule, "labels must be 0 or 1");
}

std::size_t LabelSeries::count(Label value) const noexcept
{
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), value));
}

Event::Event(double start, double end, Label label) : start_(start), end_(end), label_(label)
{
    if (!std::isfinite(start) || !std::isfinite(end))
        fail(ErrorKind::validation, kModule, "event bounds must be finite");
    if (!(start < end))
        fail(ErrorKind::validation, kModule,
             "event must have positive length, got [" + format_double(start) + ", " + format_double(end) + ")");
    if (label > 1) fail(ErrorKind::validation, kModule, "event label must be 0 or 1");
}

void validate_recording_metas(std::span<const RecordingMeta> metas)
{
    std::map<std::string, std::vector<std::size_t>> seq_by_subject;
    std::set<std::string> file_ids;
    for (const auto& m : metas) {
        if (!(m.duration_s > 0.0))
            fail(ErrorKind::validation, kModule, "recording '" + m.file_id + "' has non-positive duration");
        if (!(m.fs > 0.0)) fail(ErrorKind::validation, kModule, "recording '" + m.file_id + "' has non-positive fs");
        if (!file_ids.insert(m.file_id).second)
            fail(ErrorKind::validation, kModule, "duplicate file id '" + m.file_id + "'");
        seq_by_subject[m.subject_id].push_back(m.seq_index);
    }
    for (auto& [subject, seqs] : seq_by_subject) {
        std::sort(seqs.begin(), seqs.end());
        for (std::size_t i = 0; i < seqs.size(); ++i)
            if (seqs[i] != i)
                fail(ErrorKind::validation, kModule,
                     "subject '" + subject + "': seq_index values must be unique and contiguous from 0");
    }
}

std::vector<Event> labels_to_events(const LabelSeries& series, Label target)
{
    std::vector<Event> events;
    const auto labels = series.labels();
    std::size_t i = 0;
    while (i < labels.size()) {
        if (labels[i] != target) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < labels.size() && labels[j] == target) ++j;
        events.emplace_back(series.time_of(i), series.time_of(j), target);
        i = j;
    }
    return events;
}

LabelSeries events_to_labels(std::span<const Event> events, double fs, double duration_s, double origin)
{
    if (!(fs > 0.0)) fail(ErrorKind::validation, kModule, "sampling frequency must be positive");
    if (!(duration_s >= 0.0)) fail(ErrorKind::validation, kModule, "duration must be non-negative");
    require_sorted_disjoint(events, kModule, "events");

    const double span_samples = duration_s * fs;
    const auto n = static_cast<std::size_t>(std::llround(span_samples));
    std::vector<Label> labels(n, kBackground);
    for (const auto& e : events) {
        const double lo = (e.start() - origin) * fs;
        const double hi = (e.end() - origin) * fs;
        if (lo < -kGridSlack || hi > span_samples + kGridSlack)
            fail(ErrorKind::boundary, kModule,
                 "event [" + format_double(e.start()) + ", " + format_double(e.end()) + ") outside recording span [" +
                     format_double(origin) + ", " + format_double(origin + duration_s) + ")");
        const auto first = static_cast<std::size_t>(std::max(0.0, std::ceil(lo - kGridSlack)));
        const auto last = std::min(n, static_cast<std::size_t>(std::max(0.0, std::ceil(hi - kGridSlack))));
        for (std::size_t i = first; i < last; ++i) labels[i] = e.label();
    }
    return LabelSeries(std::move(labels), fs, origin);
}

void require_sorted_disjoint(std::span<const Event> events, const char* module, const char* what)
{
    for (std::size_t i = 1; i < events.size(); ++i) {
        if (events[i].start() < events[i - 1].end())
            fail(ErrorKind::validation, module,
                 std::string(what) + " must be sorted and non-overlapping (event " + std::to_string(i) + " starts at " +
                     format_double(events[i].start()) + " before previous end " + format_double(events[i - 1].end()) +
                     ")");
    }
}

std::vector<Annotation> read_annotations(std::istream& in)
{
    std::vector<Annotation> rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (trim(line).empty()) continue;
        if (!header_seen) {
            if (trim(line) != kAnnotationHeader)
                fail(ErrorKind::parse, kModule,
                     "annotation header must be '" + std::string(kAnnotationHeader) + "', got '" + line + "'");
            header_seen = true;
            continue;
        }
        auto fields = split_csv_line(line);
        if (fields.size() != 5)
            fail(ErrorKind::parse, kModule,
                 "line " + std::to_string(line_no) + ": expected 5 fields, got " + std::to_string(fields.size()));
        for (auto& f : fields) f = trim(f);
        const double start = parse_seconds(fields[2], line_no);
        const double end = parse_seconds(fields[3], line_no);
        if (!(start < end))
            fail(ErrorKind::parse, kModule, "line " + std::to_string(line_no) + ": zero-length or reversed event");
        rows.push_back(Annotation{fields[0], fields[1], Event(start, end, parse_label(fields[4], line_no))});
    }
    if (!header_seen) fail(ErrorKind::parse, kModule, "annotation file is empty (missing header)");
    return rows;
}

std::vector<Annotation> read_annotations_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, kModule, "cannot open annotation file '" + path + "'");
    return read_annotations(in);
}

void write_annotations(std::ostream& out, std::span<const Annotation> rows)
{
    out << kAnnotationHeader << '\n';
    for (const auto& r : rows)
        out << r.subject << ',' << r.file << ',' << format_double(r.event.start()) << ','
            << format_double(r.event.end()) << ',' << static_cast<int>(r.event.label()) << '\n';
}

std::string format_double(double value)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

}  // namespace seizeval
