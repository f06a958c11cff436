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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace seizeval {

/// Binary class value: 0 = non-seizure, 1 = seizure.
using Label = std::uint8_t;

inline constexpr Label kBackground = 0;
inline constexpr Label kSeizure = 1;

/// Per-sample binary annotation. Immutable once built.
class LabelSeries {
public:
    LabelSeries() = default;
    LabelSeries(std::vector<Label> labels, double fs, double origin = 0.0);

    std::span<const Label> labels() const noexcept { return labels_; }
    Label operator[](std::size_t i) const noexcept { return labels_[i]; }
    std::size_t size() const noexcept { return labels_.size(); }
    bool empty() const noexcept { return labels_.empty(); }
    double fs() const noexcept { return fs_; }
    double origin() const noexcept { return origin_; }
    double duration_s() const noexcept { return static_cast<double>(labels_.size()) / fs_; }

    /// Timestamp of sample i in seconds.
    double time_of(std::size_t i) const noexcept { return origin_ + static_cast<double>(i) / fs_; }

    std::size_t count(Label value) const noexcept;

    /// Moves the label vector out, leaving the series empty.
    std::vector<Label> release() && { return std::move(labels_); }

    friend bool operator==(const LabelSeries&, const LabelSeries&) = default;

private:
    std::vector<Label> labels_;
    double fs_ = 1.0;
    double origin_ = 0.0;
};

/// Half-open interval [start, end) in seconds holding one class episode.
class Event {
public:
    Event(double start, double end, Label label = kSeizure);

    double start() const noexcept { return start_; }
    double end() const noexcept { return end_; }
    double duration() const noexcept { return end_ - start_; }
    Label label() const noexcept { return label_; }

    friend bool operator==(const Event&, const Event&) = default;

private:
    double start_;
    double end_;
    Label label_;
};

struct RecordingMeta {
    std::string subject_id;
    std::string file_id;
    double duration_s = 0.0;
    std::size_t n_channels = 0;
    double fs = 0.0;
    std::size_t seq_index = 0;
};

/// Checks seq_index uniqueness and contiguity per subject plus positive durations.
void validate_recording_metas(std::span<const RecordingMeta> metas);

/// Maximal runs of `target` as events, in order.
std::vector<Event> labels_to_events(const LabelSeries& series, Label target = kSeizure);

/// Inverse of labels_to_events: sample i is 1 iff origin + i/fs lies in an event.
/// Sample count is round(duration_s * fs).
LabelSeries events_to_labels(std::span<const Event> events, double fs, double duration_s, double origin = 0.0);

/// Throws a validation error unless events are sorted and pairwise non-overlapping.
/// Touching events ([a,b) followed by [b,c)) are accepted.
void require_sorted_disjoint(std::span<const Event> events, const char* module, const char* what);

/// One row of the annotation CSV.
struct Annotation {
    std::string subject;
    std::string file;
    Event event;
};

/// Header of the annotation CSV shared by every tool.
inline constexpr const char* kAnnotationHeader = "subject,file,start_s,end_s,label";

std::vector<Annotation> read_annotations(std::istream& in);
std::vector<Annotation> read_annotations_file(const std::string& path);
void write_annotations(std::ostream& out, std::span<const Annotation> rows);

/// Shortest decimal text that round-trips the double exactly.
std::string format_double(double value);

}  // namespace seizeval
