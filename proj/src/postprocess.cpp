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

#include "seizeval/postprocess.hpp"

#include "seizeval/error.hpp"

#include <algorithm>
#include <cmath>

namespace seizeval {

namespace {
constexpr const char* kModule = "postprocess";
}

void PostprocessConfig::validate() const
{
    if (!(smooth_window_s > 0.0)) fail(ErrorKind::validation, kModule, "smooth_window_s must be > 0");
    if (!(merge_gap_s >= 0.0)) fail(ErrorKind::validation, kModule, "merge_gap_s must be >= 0");
    if (!(min_event_s >= 0.0)) fail(ErrorKind::validation, kModule, "min_event_s must be >= 0");
}

LabelSeries smooth_majority(const LabelSeries& hyp, const PostprocessConfig& cfg)
{
    cfg.validate();
    const auto w = static_cast<std::size_t>(std::max<long long>(1, std::llround(cfg.smooth_window_s * hyp.fs())));
    const auto in = hyp.labels();
    std::vector<Label> out(in.size(), kBackground);
    std::size_t ones = 0;
    for (std::size_t i = 0; i < in.size(); ++i) {
        ones += in[i];
        if (i >= w) ones -= in[i - w];
        const std::size_t span = std::min(i + 1, w);
        out[i] = 2 * ones > span ? kSeizure : kBackground;
    }
    return LabelSeries(std::move(out), hyp.fs(), hyp.origin());
}

std::vector<Event> merge_close_events(std::span<const Event> events, const PostprocessConfig& cfg)
{
    cfg.validate();
    require_sorted_disjoint(events, kModule, "events");

    std::vector<Event> merged;
    merged.reserve(events.size());
    for (const auto& e : events) {
        if (!merged.empty() && e.start() - merged.back().end() < cfg.merge_gap_s)
            merged.back() = Event(merged.back().start(), std::max(merged.back().end(), e.end()), merged.back().label());
        else
            merged.push_back(e);
    }
    if (cfg.min_event_s > 0.0)
        std::erase_if(merged, [&](const Event& e) { return e.duration() < cfg.min_event_s; });
    return merged;
}

LabelSeries postprocess(const LabelSeries& hyp, const PostprocessConfig& cfg)
{
    const LabelSeries smoothed = smooth_majority(hyp, cfg);
    const auto events = merge_close_events(labels_to_events(smoothed), cfg);
    return events_to_labels(events, hyp.fs(), hyp.duration_s(), hyp.origin());
}

}  // namespace seizeval
