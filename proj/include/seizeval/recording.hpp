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

#pragma once

#include "seizeval/timeline.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace seizeval {

/// One multichannel signal file with its seizure annotations (file-relative seconds).
struct Recording {
    RecordingMeta meta;
    std::vector<std::string> channel_labels;
    std::vector<std::vector<float>> channels;  ///< physical units, one vector per channel
    std::vector<Event> seizures;

    std::size_t n_samples() const noexcept { return channels.empty() ? 0 : channels.front().size(); }
};

/// Recordings of all subjects. Within a subject, recordings are contiguous in
/// time and ordered by seq_index.
class RecordingSet {
public:
    RecordingSet() = default;
    explicit RecordingSet(std::vector<Recording> recordings);

    std::span<const Recording> recordings() const noexcept { return recordings_; }
    std::span<Recording> recordings() noexcept { return recordings_; }

    /// Subject ids in sorted order.
    std::vector<std::string> subjects() const;

    /// Indices into recordings() for one subject, in seq_index order.
    std::vector<std::size_t> indices_of(const std::string& subject) const;

    std::vector<RecordingMeta> metas() const;

private:
    std::vector<Recording> recordings_;
};

/// Half-open sample range [begin, end) on a subject's concatenated timeline.
struct TimelineSpan {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
    friend bool operator==(const TimelineSpan&, const TimelineSpan&) = default;
};

/// Signal-free view of one subject's timeline: what the arrangement builders need.
struct SubjectLayout {
    std::string subject_id;
    double fs = 0.0;
    std::size_t n_channels = 0;
    std::size_t n_samples = 0;
    std::vector<std::string> recording_ids;
    std::vector<std::size_t> recording_offsets;  ///< first timeline sample of each recording
    std::vector<Event> seizures;                 ///< timeline seconds, sorted

    double duration_s() const noexcept { return static_cast<double>(n_samples) / fs; }
};

/// Concatenated channels of one subject, e.g. after band-pass filtering.
struct SubjectSignals {
    std::string subject_id;
    double fs = 0.0;
    std::vector<std::string> channel_labels;
    std::vector<std::vector<float>> channels;

    std::size_t n_samples() const noexcept { return channels.empty() ? 0 : channels.front().size(); }
};

SubjectLayout make_layout(const RecordingSet& set, const std::string& subject);
std::vector<SubjectLayout> make_layouts(const RecordingSet& set);

/// Concatenates a subject's recordings; moves the sample data out of `set`.
SubjectSignals take_signals(RecordingSet& set, const std::string& subject);

/// Seizure labels for a timeline range at the layout's sampling rate.
std::vector<Label> timeline_labels(const SubjectLayout& layout, TimelineSpan span);

}  // namespace seizeval
