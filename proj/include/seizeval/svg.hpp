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

#include <span>
#include <string>
#include <vector>

namespace seizeval {

/// One bar group per series: the subject-averaged value as a bar, individual
/// subjects as dots.
struct PanelSeries {
    std::string name;
    ScoreReport average;
    std::vector<ScoreReport> subjects;
};

/// Two-panel standalone SVG: sensitivity/precision/F1 at episode and duration
/// level plus F1_DE on a [0, 1] axis, and false alarms per day beside it.
std::string render_metric_panel(std::span<const PanelSeries> series, const std::string& title);

}  // namespace seizeval
