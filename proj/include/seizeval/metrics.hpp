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

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace seizeval {

enum class CountUnit { samples, events };

/// Confusion counts. Reals, because overlap-weighted scoring produces fractions.
struct MetricCounts {
    double tp = 0.0;
    double fp = 0.0;
    double fn = 0.0;
    double tn = 0.0;
    CountUnit unit = CountUnit::samples;

    MetricCounts& operator+=(const MetricCounts& other);
    friend bool operator==(const MetricCounts&, const MetricCounts&) = default;
};

/// The episode/duration metric panel plus false alarm rate.
struct ScoreReport {
    double sensitivity_ep = 0.0;
    double precision_ep = 0.0;
    double f1_ep = 0.0;
    double sensitivity_dur = 0.0;
    double precision_dur = 0.0;
    double f1_dur = 0.0;
    double f1_de = 0.0;
    double far_per_day = 0.0;
    MetricCounts counts_ep{0, 0, 0, 0, CountUnit::events};
    MetricCounts counts_dur{};
    double test_duration_s = 0.0;

    friend bool operator==(const ScoreReport&, const ScoreReport&) = default;
};

/// Sample-by-sample confusion counts (epoch of one sample).
MetricCounts score_duration(const LabelSeries& ref, const LabelSeries& hyp);

/// Any-overlap episode scoring. A reference event is a hit if any hypothesis
/// event overlaps it; a hypothesis event is a false positive only if it
/// overlaps no reference event. tn is always 0.
MetricCounts score_episode(std::span<const Event> ref, std::span<const Event> hyp);

/// Overlap-weighted episode scoring: each reference event contributes the
/// fraction of it covered by hypotheses as tp (remainder as fn); each
/// hypothesis event contributes the fraction of it outside every reference
/// event as fp.
MetricCounts score_taes(std::span<const Event> ref, std::span<const Event> hyp);

/// False positives scaled linearly to a 24 h period.
double far_per_day(const MetricCounts& counts_ep, double test_duration_s);

/// Rates, F1 per level, F1_DE and FAR from raw counts.
///
/// A rate with a zero denominator is 0, except on a perfect negative (no
/// reference positives and no hypothesis positives) where sensitivity and
/// precision are both 1.
ScoreReport finalize_report(const MetricCounts& counts_dur, const MetricCounts& counts_ep, double test_duration_s);

double sensitivity(const MetricCounts& c);
double precision(const MetricCounts& c);
double f1_score(double sensitivity, double precision);

/// How fold results become one number.
///
/// fold_average: score each fold, then take the arithmetic mean of every rate
/// (called "micro-averaging" in some of the seizure-detection literature).
/// pooled: append all test predictions in temporal order and score once
/// ("macro-averaging" in the same literature).
enum class Aggregation { fold_average, pooled };

std::string_view to_string(Aggregation mode) noexcept;
/// Accepts fold_average|pooled and the aliases micro|macro.
Aggregation parse_aggregation(std::string_view text);

/// Raw per-fold counts; additive across files because events never span files.
struct FoldCounts {
    MetricCounts dur{};
    MetricCounts ep{0, 0, 0, 0, CountUnit::events};
    double duration_s = 0.0;

    FoldCounts& operator+=(const FoldCounts& other);
};

/// Counts for one test file (ref and hyp must be aligned).
FoldCounts count_file(const LabelSeries& ref, const LabelSeries& hyp);

/// One (reference, hypothesis) pair per test file.
struct SeriesPair {
    LabelSeries ref;
    LabelSeries hyp;
};

/// Combines folds. FAR always uses the pooled false positives and duration.
ScoreReport aggregate_counts(std::span<const FoldCounts> folds, Aggregation mode);

/// Each fold is a list of test files in temporal order. Events are never
/// joined across file boundaries.
ScoreReport aggregate_folds(std::span<const std::vector<SeriesPair>> folds, Aggregation mode);

/// Convenience: one test file per fold.
ScoreReport aggregate_folds(std::span<const SeriesPair> folds, Aggregation mode);

/// Arithmetic mean of the rates and FAR; counts and durations are summed.
ScoreReport average_reports(std::span<const ScoreReport> reports);

// Serialization. The CSV column order is fixed; bump the version when it changes.
inline constexpr int kReportCsvVersion = 1;
std::vector<std::string> report_csv_columns();
std::string report_csv_header();
std::string report_csv_row(const ScoreReport& report);

nlohmann::ordered_json to_json(const ScoreReport& report);
nlohmann::ordered_json to_json(const MetricCounts& counts);
ScoreReport report_from_json(const nlohmann::json& j);

}  // namespace seizeval
