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

#include "seizeval/recording.hpp"

#include "seizeval/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace seizeval {

namespace {
constexpr const char* kModule = "recording";
}

RecordingSet::RecordingSet(std::vector<Recording> recordings) : recordings_(std::move(recordings))
{
    const auto all = metas();
    validate_recording_metas(all);
    for (const auto& r : recordings_) {
        if (r.channels.size() != r.channel_labels.size() || r.channels.size() != r.meta.n_channels)
            fail(ErrorKind::validation, kModule, "recording '" + r.meta.file_id + "': channel count mismatch");
        for (const auto& ch : r.channels)
            if (ch.size() != r.n_samples())
                fail(ErrorKind::validation, kModule, "recording '" + r.meta.file_id + "': ragged channels");
        require_sorted_disjoint(r.seizures, kModule, "seizure annotations");
        for (const auto& e : r.seizures)
            if (e.start() < 0.0 || e.end() > r.meta.duration_s + 1e-9)
                fail(ErrorKind::boundary, kModule,
                     "recording '" + r.meta.file_id + "': seizure [" + format_double(e.start()) + ", " +
                         format_double(e.end()) + ") outside [0, " + format_double(r.meta.duration_s) + ")");
    }
    for (const auto& subject : subjects()) {
        const auto idx = indices_of(subject);
        for (auto i : idx) {
            const auto& a = recordings_[idx.front()];
            const auto& b = recordings_[i];
            if (a.meta.fs != b.meta.fs || a.channel_labels != b.channel_labels)
                fail(ErrorKind::validation, kModule,
                     "subject '" + subject + "': recordings must share fs and channel layout");
        }
    }
}

std::vector<std::string> RecordingSet::subjects() const
{
    std::set<std::string> s;
    for (const auto& r : recordings_) s.insert(r.meta.subject_id);
    return {s.begin(), s.end()};
}

std::vector<std::size_t> RecordingSet::indices_of(const std::string& subject) const
{
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < recordings_.size(); ++i)
        if (recordings_[i].meta.subject_id == subject) idx.push_back(i);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return recordings_[a].meta.seq_index < recordings_[b].meta.seq_index;
    });
    return idx;
}

std::vector<RecordingMeta> RecordingSet::metas() const
{
    std::vector<RecordingMeta> m;
    m.reserve(recordings_.size());
    for (const auto& r : recordings_) m.push_back(r.meta);
    return m;
}

SubjectLayout make_layout(const RecordingSet& set, const std::string& subject)
{
    const auto idx = set.indices_of(subject);
    if (idx.empty()) fail(ErrorKind::lookup, kModule, "unknown subject '" + subject + "'");
    SubjectLayout layout;
    layout.subject_id = subject;
    const auto recs = set.recordings();
    layout.fs = recs[idx.front()].meta.fs;
    layout.n_channels = recs[idx.front()].meta.n_channels;
    for (auto i : idx) {
        const auto& r = recs[i];
        const double offset_s = static_cast<double>(layout.n_samples) / layout.fs;
        layout.recording_ids.push_back(r.meta.file_id);
        layout.recording_offsets.push_back(layout.n_samples);
        for (const auto& e : r.seizures) layout.seizures.emplace_back(offset_s + e.start(), offset_s + e.end(), e.label());
        const std::size_t n = r.n_samples() > 0 ? r.n_samples()
                                                : static_cast<std::size_t>(std::llround(r.meta.duration_s * r.meta.fs));
        layout.n_samples += n;
    }
    require_sorted_disjoint(layout.seizures, kModule, "subject seizures");
    return layout;
}

std::vector<SubjectLayout> make_layouts(const RecordingSet& set)
{
    std::vector<SubjectLayout> out;
    for (const auto& s : set.subjects()) out.push_back(make_layout(set, s));
    return out;
}

SubjectSignals take_signals(RecordingSet& set, const std::string& subject)
{
    const auto idx = set.indices_of(subject);
    if (idx.empty()) fail(ErrorKind::lookup, kModule, "unknown subject '" + subject + "'");
    auto recs = set.recordings();
    SubjectSignals out;
    out.subject_id = subject;
    out.fs = recs[idx.front()].meta.fs;
    out.channel_labels = recs[idx.front()].channel_labels;
    out.channels.resize(out.channel_labels.size());
    std::size_t total = 0;
    for (auto i : idx) total += recs[i].n_samples();
    for (auto& ch : out.channels) ch.reserve(total);
    for (auto i : idx) {
        auto& r = recs[i];
        for (std::size_t c = 0; c < r.channels.size(); ++c) {
            out.channels[c].insert(out.channels[c].end(), r.channels[c].begin(), r.channels[c].end());
            std::vector<float>().swap(r.channels[c]);
        }
    }
    return out;
}

std::vector<Label> timeline_labels(const SubjectLayout& layout, TimelineSpan span)
{
    std::vector<Label> labels(span.size(), kBackground);
    for (const auto& e : layout.seizures) {
        const auto first = static_cast<std::size_t>(std::max(0.0, std::ceil(e.start() * layout.fs - 1e-6)));
        const auto last = static_cast<std::size_t>(std::max(0.0, std::ceil(e.end() * layout.fs - 1e-6)));
        const std::size_t lo = std::max(first, span.begin);
        const std::size_t hi = std::min(last, span.end);
        for (std::size_t i = lo; i < hi; ++i) labels[i - span.begin] = e.label();
    }
    return labels;
}

}  // namespace seizeval
