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

// Brute-force reference implementations and random generators for the
// property tests. Deliberately naive: per-sample loops and pairwise scans.

#include "seizeval/metrics.hpp"
#include "seizeval/rng.hpp"
#include "seizeval/timeline.hpp"

#include <algorithm>
#include <cstddef>
#include <vector>

namespace oracle {

using seizeval::Event;
using seizeval::Label;
using seizeval::MetricCounts;

inline MetricCounts duration_counts(const std::vector<Label>& ref, const std::vector<Label>& hyp)
{
    MetricCounts c;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        if (ref[i] && hyp[i]) c.tp += 1;
        else if (!ref[i] && hyp[i]) c.fp += 1;
        else if (ref[i] && !hyp[i]) c.fn += 1;
        else c.tn += 1;
    }
    return c;
}

/// Events from labels by scanning for 0->1 and 1->0 transitions.
inline std::vector<Event> runs(const std::vector<Label>& labels, double fs)
{
    std::vector<Event> out;
    std::size_t i = 0;
    while (i < labels.size()) {
        if (!labels[i]) { ++i; continue; }
        std::size_t j = i;
        while (j < labels.size() && labels[j]) ++j;
        out.emplace_back(static_cast<double>(i) / fs, static_cast<double>(j) / fs);
        i = j;
    }
    return out;
}

inline bool overlaps(const Event& a, const Event& b) { return a.start() < b.end() && b.start() < a.end(); }

inline double overlap_len(const Event& a, const Event& b)
{
    return std::max(0.0, std::min(a.end(), b.end()) - std::max(a.start(), b.start()));
}

inline MetricCounts episode_counts(const std::vector<Event>& ref, const std::vector<Event>& hyp)
{
    MetricCounts c;
    c.unit = seizeval::CountUnit::events;
    for (const auto& r : ref) {
        bool hit = false;
        for (const auto& h : hyp) hit = hit || overlaps(r, h);
        (hit ? c.tp : c.fn) += 1;
    }
    for (const auto& h : hyp) {
        bool hit = false;
        for (const auto& r : ref) hit = hit || overlaps(r, h);
        if (!hit) c.fp += 1;
    }
    return c;
}

/// Overlap-weighted counts. Both lists are disjoint, so pairwise overlap
/// lengths add up to the overlap with the union.
inline MetricCounts taes_counts(const std::vector<Event>& ref, const std::vector<Event>& hyp)
{
    MetricCounts c;
    c.unit = seizeval::CountUnit::events;
    for (const auto& r : ref) {
        double covered = 0.0;
        for (const auto& h : hyp) covered += overlap_len(r, h);
        c.tp += covered / r.duration();
        c.fn += 1.0 - covered / r.duration();
    }
    for (const auto& h : hyp) {
        double inside = 0.0;
        for (const auto& r : ref) inside += overlap_len(r, h);
        c.fp += (h.duration() - inside) / h.duration();
    }
    return c;
}

/// Trailing-window strict majority, by recounting every window.
inline std::vector<Label> windowed_majority(const std::vector<Label>& x, std::size_t w)
{
    std::vector<Label> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const std::size_t lo = i + 1 >= w ? i + 1 - w : 0;
        std::size_t ones = 0;
        for (std::size_t k = lo; k <= i; ++k) ones += x[k];
        out[i] = 2 * ones > i - lo + 1 ? 1 : 0;
    }
    return out;
}

/// Hull merging by repeated passes until nothing changes.
inline std::vector<Event> merge_fixpoint(std::vector<Event> ev, double gap, double min_len)
{
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < ev.size(); ++i) {
            if (ev[i + 1].start() - ev[i].end() < gap) {
                ev[i] = Event(ev[i].start(), ev[i + 1].end());
                ev.erase(ev.begin() + static_cast<std::ptrdiff_t>(i) + 1);
                changed = true;
                break;
            }
        }
    }
    std::erase_if(ev, [&](const Event& e) { return e.duration() < min_len; });
    return ev;
}

inline double line_length(const std::vector<double>& x)
{
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += x[i] > x[i - 1] ? x[i] - x[i - 1] : x[i - 1] - x[i];
    return s / static_cast<double>(x.size());
}

// Generators.

/// Random binary vector with runs of geometric length, so that both long
/// episodes and single-sample flips occur.
inline std::vector<Label> random_labels(seizeval::Rng& rng, std::size_t n)
{
    std::vector<Label> out(n);
    Label cur = rng.below(2) ? 1 : 0;
    const double p_flip = 0.002 + 0.3 * rng.uniform();
    for (auto& v : out) {
        if (rng.uniform() < p_flip) cur ^= 1;
        v = cur;
    }
    return out;
}

/// Sorted, disjoint events on an integer-second grid within [0, span).
inline std::vector<Event> random_events(seizeval::Rng& rng, std::size_t max_events, double span)
{
    std::vector<Event> out;
    const std::size_t n = rng.below(max_events + 1);
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        t += static_cast<double>(rng.below(60));
        const double len = 1.0 + static_cast<double>(rng.below(40));
        if (t + len > span) break;
        out.emplace_back(t, t + len);
        t += len;
    }
    return out;
}

}  // namespace oracle
