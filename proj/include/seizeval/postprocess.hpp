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

#include <span>
#include <vector>

namespace seizeval {

struct PostprocessConfig {
    double smooth_window_s = 5.0;
    double merge_gap_s = 30.0;
    double min_event_s = 0.0;  ///< 0 disables the minimum-length filter.

    void validate() const;
};

/// Causal windowed majority vote. Output sample i is 1 iff strictly more than
/// half of the labels in the trailing window [i-w+1, i] are 1, where
/// w = round(smooth_window_s * fs) and the window is truncated at the series
/// start. Even-sized ties resolve to 0.
///
/// Being causal, it delays detected onsets by up to half a window.
LabelSeries smooth_majority(const LabelSeries& hyp, const PostprocessConfig& cfg);

/// Replaces consecutive events separated by less than merge_gap_s with their
/// hull (transitively), then drops events shorter than min_event_s.
std::vector<Event> merge_close_events(std::span<const Event> events, const PostprocessConfig& cfg);

/// smooth_majority, then merge_close_events on the seizure events, rendered
/// back onto the sample grid of `hyp`. Applied per file, so events are never
/// merged across file boundaries.
LabelSeries postprocess(const LabelSeries& hyp, const PostprocessConfig& cfg);

}  // namespace seizeval
