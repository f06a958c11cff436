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

#include "seizeval/metrics.hpp"
#include "seizeval/timeline.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace seizeval {

/// Per-sample hypothesis for one file. CSV form: subject,file,fs,labels where
/// labels is a string of '0'/'1' characters.
struct LabelTrack {
    std::string subject;
    std::string file;
    double fs = 0.0;
    std::vector<Label> labels;
};

inline constexpr const char* kLabelTrackHeader = "subject,file,fs,labels";

std::vector<LabelTrack> read_label_tracks(std::istream& in);
void write_label_tracks(std::ostream& out, std::span<const LabelTrack> tracks);

/// Length of one scored file. CSV form: subject,file,duration_s.
struct FileSpan {
    std::string subject;
    std::string file;
    double duration_s = 0.0;
};

inline constexpr const char* kFileSpanHeader = "subject,file,duration_s";

std::vector<FileSpan> read_file_spans(std::istream& in);

/// Scores annotation CSV rows against each other. Files are `spans` when
/// given, otherwise every file named by either input with `default_duration_s`.
/// Events outside a file's span, or files missing from `spans`, are alignment
/// errors. Each file counts as one fold for aggregation.
ScoreReport score_annotations(std::span<const Annotation> ref, std::span<const Annotation> hyp,
                              std::span<const FileSpan> spans, std::optional<double> default_duration_s, double fs,
                              Aggregation mode);

/// Scores reference annotations against per-sample label tracks; each track
/// defines its file's span.
ScoreReport score_label_tracks(std::span<const Annotation> ref, std::span<const LabelTrack> hyp, Aggregation mode);

}  // namespace seizeval
