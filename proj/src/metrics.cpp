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

#include "seizeval/metrics.hpp"

#include "seizeval/error.hpp"

#include <algorithm>
#include <sstream>

namespace seizeval {

namespace {

constexpr const char* kModule = "metrics";
constexpr double kSecondsPerDay = 86400.0;

double overlap(const Event& a, const Event& b)
{
    return std::max(0.0, std::min(a.end(), b.end()) - std::max(a.start(), b.start()));
}

bool overlaps(const Event& a, const Event& b)
{
    return a.start() < b.end() && b.start() < a.end();
}

// For each event of `of`, the summed overlap with the (disjoint) events of `against`.
std::vector<double> covered_lengths(std::span<const Event> of, std::span<const Event> against)
{
    std::vector<double> covered(of.size(), 0.0);
    std::size_t first = 0;
    for (std::size_t i = 0; i < of.size(); ++i) {
        while (first < against.size() && against[first].end() <= of[i].start()) ++first;
        for (std::size_t j = first; j < against.size() && against[j].start() < of[i].end(); ++j)
            covered[i] += overlap(of[i], against[j]);
    }
    return covered;
}

std::vector<bool> any_hit(std::span<const Event> of, std::span<const Event> against)
{
    std::vector<bool> hit(of.size(), false);
    std::size_t first = 0;
    for (std::size_t i = 0; i < of.size(); ++i) {
        while (first < against.size() && against[first].end() <= of[i].start()) ++first;
        hit[i] = first < against.size() && overlaps(of[i], against[first]);
    }
    return hit;
}

}  // namespace

MetricCounts& MetricCounts::operator+=(const MetricCounts& other)
{
    tp += other.tp;
    fp += other.fp;
    fn += other.fn;
    tn += other.tn;
    return *this;
}

FoldCounts& FoldCounts::operator+=(const FoldCounts& other)
{
    dur += other.dur;
    ep += other.ep;
    duration_s += other.duration_s;
    return *this;
}

MetricCounts score_duration(const LabelSeries& ref, const LabelSeries& hyp)
{
    if (ref.size() != hyp.size() || ref.fs() != hyp.fs() || ref.origin() != hyp.origin())
        fail(ErrorKind::alignment, kModule,
             "reference (" + std::to_string(ref.size()) + " samples @ " + format_double(ref.fs()) +
                 " Hz) and hypothesis (" + std::to_string(hyp.size()) + " samples @ " + format_double(hyp.fs()) +
                 " Hz) are not aligned");
    // Index by 2*ref + hyp: tn, fp, fn, tp.
    std::size_t tally[4] = {0, 0, 0, 0};
    const auto r = ref.labels();
    const auto h = hyp.labels();
    for (std::size_t i = 0; i < r.size(); ++i) ++tally[2 * r[i] + h[i]];
    MetricCounts c;
    c.unit = CountUnit::samples;
    c.tn = static_cast<double>(tally[0]);
    c.fp = static_cast<double>(tally[1]);
    c.fn = static_cast<double>(tally[2]);
    c.tp = static_cast<double>(tally[3]);
    return c;
}

MetricCounts score_episode(std::span<const Event> ref, std::span<const Event> hyp)
{
    require_sorted_disjoint(ref, kModule, "reference events");
    require_sorted_disjoint(hyp, kModule, "hypothesis events");
    MetricCounts c;
    c.unit = CountUnit::events;
    for (bool hit : any_hit(ref, hyp)) (hit ? c.tp : c.fn) += 1.0;
    for (bool hit : any_hit(hyp, ref))
        if (!hit) c.fp += 1.0;
    return c;
}

MetricCounts score_taes(std::span<const Event> ref, std::span<const Event> hyp)
{
    require_sorted_disjoint(ref, kModule, "reference events");
    require_sorted_disjoint(hyp, kModule, "hypothesis events");
    MetricCounts c;
    c.unit = CountUnit::events;
    const auto ref_cov = covered_lengths(ref, hyp);
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double frac = std::clamp(ref_cov[i] / ref[i].duration(), 0.0, 1.0);
        c.tp += frac;
        c.fn += 1.0 - frac;
    }
    const auto hyp_cov = covered_lengths(hyp, ref);
    for (std::size_t i = 0; i < hyp.size(); ++i)
        c.fp += 1.0 - std::clamp(hyp_cov[i] / hyp[i].duration(), 0.0, 1.0);
    return c;
}

double far_per_day(const MetricCounts& counts_ep, double test_duration_s)
{
    if (!(test_duration_s > 0.0))
        fail(ErrorKind::domain, kModule, "test duration must be positive, got " + format_double(test_duration_s));
    return counts_ep.fp * kSecondsPerDay / test_duration_s;
}

double sensitivity(const MetricCounts& c)
{
    const double denom = c.tp + c.fn;
    if (denom > 0.0) return c.tp / denom;
    return c.fp == 0.0 ? 1.0 : 0.0;
}

double precision(const MetricCounts& c)
{
    const double denom = c.tp + c.fp;
    if (denom > 0.0) return c.tp / denom;
    return c.fn == 0.0 ? 1.0 : 0.0;
}

double f1_score(double sens, double prec)
{
    const double denom = sens + prec;
    return denom > 0.0 ? 2.0 * sens * prec / denom : 0.0;
}

ScoreReport finalize_report(const MetricCounts& counts_dur, const MetricCounts& counts_ep, double test_duration_s)
{
    ScoreReport r;
    r.counts_dur = counts_dur;
    r.counts_ep = counts_ep;
    r.counts_dur.unit = CountUnit::samples;
    r.counts_ep.unit = CountUnit::events;
    r.test_duration_s = test_duration_s;

    r.sensitivity_ep = sensitivity(counts_ep);
    r.precision_ep = precision(counts_ep);
    r.f1_ep = f1_score(r.sensitivity_ep, r.precision_ep);
    r.sensitivity_dur = sensitivity(counts_dur);
    r.precision_dur = precision(counts_dur);
    r.f1_dur = f1_score(r.sensitivity_dur, r.precision_dur);
    r.f1_de = (r.f1_ep + r.f1_dur) / 2.0;
    if (test_duration_s > 0.0)
        r.far_per_day = far_per_day(counts_ep, test_duration_s);
    else if (counts_ep.fp > 0.0)
        fail(ErrorKind::domain, kModule, "false positives on a zero-length test span");
    return r;
}

std::string_view to_string(Aggregation mode) noexcept
{
    return mode == Aggregation::fold_average ? "fold_average" : "pooled";
}

Aggregation parse_aggregation(std::string_view text)
{
    if (text == "fold_average" || text == "micro") return Aggregation::fold_average;
    if (text == "pooled" || text == "macro") return Aggregation::pooled;
    fail(ErrorKind::parse, kModule, "unknown aggregation '" + std::string(text) + "'");
}

FoldCounts count_file(const LabelSeries& ref, const LabelSeries& hyp)
{
    FoldCounts c;
    c.dur = score_duration(ref, hyp);
    c.ep = score_episode(labels_to_events(ref), labels_to_events(hyp));
    c.duration_s = ref.duration_s();
    return c;
}

ScoreReport aggregate_counts(std::span<const FoldCounts> folds, Aggregation mode)
{
    if (folds.empty()) fail(ErrorKind::domain, kModule, "cannot aggregate an empty fold list");

    FoldCounts pooled;
    for (const auto& f : folds) pooled += f;
    ScoreReport pooled_report = finalize_report(pooled.dur, pooled.ep, pooled.duration_s);
    if (mode == Aggregation::pooled) return pooled_report;

    std::vector<ScoreReport> per_fold;
    per_fold.reserve(folds.size());
    for (const auto& f : folds) {
        // Per-fold FAR is not used; only the rates are averaged.
        ScoreReport r = finalize_report(f.dur, f.ep, 0.0 < f.duration_s ? f.duration_s : 1.0);
        per_fold.push_back(r);
    }
    ScoreReport avg = average_reports(per_fold);
    avg.far_per_day = pooled_report.far_per_day;
    avg.counts_dur = pooled_report.counts_dur;
    avg.counts_ep = pooled_report.counts_ep;
    avg.test_duration_s = pooled_report.test_duration_s;
    return avg;
}

ScoreReport aggregate_folds(std::span<const std::vector<SeriesPair>> folds, Aggregation mode)
{
    std::vector<FoldCounts> counts;
    counts.reserve(folds.size());
    for (const auto& fold : folds) {
        FoldCounts c;
        for (const auto& pair : fold) c += count_file(pair.ref, pair.hyp);
        counts.push_back(c);
    }
    return aggregate_counts(counts, mode);
}

ScoreReport aggregate_folds(std::span<const SeriesPair> folds, Aggregation mode)
{
    std::vector<FoldCounts> counts;
    counts.reserve(folds.size());
    for (const auto& pair : folds) counts.push_back(count_file(pair.ref, pair.hyp));
    return aggregate_counts(counts, mode);
}

ScoreReport average_reports(std::span<const ScoreReport> reports)
{
    if (reports.empty()) fail(ErrorKind::domain, kModule, "cannot average an empty report list");
    ScoreReport avg;
    avg.counts_ep.unit = CountUnit::events;
    for (const auto& r : reports) {
        avg.sensitivity_ep += r.sensitivity_ep;
        avg.precision_ep += r.precision_ep;
        avg.f1_ep += r.f1_ep;
        avg.sensitivity_dur += r.sensitivity_dur;
        avg.precision_dur += r.precision_dur;
        avg.f1_dur += r.f1_dur;
        avg.far_per_day += r.far_per_day;
        avg.counts_ep += r.counts_ep;
        avg.counts_dur += r.counts_dur;
        avg.test_duration_s += r.test_duration_s;
    }
    const auto n = static_cast<double>(reports.size());
    avg.sensitivity_ep /= n;
    avg.precision_ep /= n;
    avg.f1_ep /= n;
    avg.sensitivity_dur /= n;
    avg.precision_dur /= n;
    avg.f1_dur /= n;
    avg.far_per_day /= n;
    avg.f1_de = (avg.f1_ep + avg.f1_dur) / 2.0;
    return avg;
}

std::vector<std::string> report_csv_columns()
{
    return {"sensitivity_ep", "precision_ep", "f1_ep",        "sensitivity_dur", "precision_dur", "f1_dur",
            "f1_de",          "far_per_day",  "counts_ep_tp", "counts_ep_fp",    "counts_ep_fn",  "counts_ep_tn",
            "counts_dur_tp",  "counts_dur_fp", "counts_dur_fn", "counts_dur_tn", "test_duration_s"};
}

std::string report_csv_header()
{
    std::string out;
    for (const auto& c : report_csv_columns()) {
        if (!out.empty()) out += ',';
        out += c;
    }
    return out;
}

std::string report_csv_row(const ScoreReport& r)
{
    const double values[] = {r.sensitivity_ep, r.precision_ep, r.f1_ep,          r.sensitivity_dur, r.precision_dur,
                             r.f1_dur,         r.f1_de,        r.far_per_day,    r.counts_ep.tp,    r.counts_ep.fp,
                             r.counts_ep.fn,   r.counts_ep.tn, r.counts_dur.tp,  r.counts_dur.fp,   r.counts_dur.fn,
                             r.counts_dur.tn,  r.test_duration_s};
    std::string out;
    for (double v : values) {
        if (!out.empty()) out += ',';
        out += format_double(v);
    }
    return out;
}

nlohmann::ordered_json to_json(const MetricCounts& c)
{
    return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn},
            {"unit", c.unit == CountUnit::samples ? "samples" : "events"}};
}

nlohmann::ordered_json to_json(const ScoreReport& r)
{
    nlohmann::ordered_json j;
    j["sensitivity_ep"] = r.sensitivity_ep;
    j["precision_ep"] = r.precision_ep;
    j["f1_ep"] = r.f1_ep;
    j["sensitivity_dur"] = r.sensitivity_dur;
    j["precision_dur"] = r.precision_dur;
    j["f1_dur"] = r.f1_dur;
    j["f1_de"] = r.f1_de;
    j["far_per_day"] = r.far_per_day;
    j["counts_ep"] = to_json(r.counts_ep);
    j["counts_dur"] = to_json(r.counts_dur);
    j["test_duration_s"] = r.test_duration_s;
    return j;
}

namespace {

MetricCounts counts_from_json(const nlohmann::json& j, CountUnit unit)
{
    MetricCounts c;
    c.tp = j.at("tp").get<double>();
    c.fp = j.at("fp").get<double>();
    c.fn = j.at("fn").get<double>();
    c.tn = j.at("tn").get<double>();
    c.unit = unit;
    return c;
}

}  // namespace

ScoreReport report_from_json(const nlohmann::json& j)
{
    try {
        ScoreReport r;
        r.sensitivity_ep = j.at("sensitivity_ep").get<double>();
        r.precision_ep = j.at("precision_ep").get<double>();
        r.f1_ep = j.at("f1_ep").get<double>();
        r.sensitivity_dur = j.at("sensitivity_dur").get<double>();
        r.precision_dur = j.at("precision_dur").get<double>();
        r.f1_dur = j.at("f1_dur").get<double>();
        r.f1_de = j.at("f1_de").get<double>();
        r.far_per_day = j.at("far_per_day").get<double>();
        r.counts_ep = counts_from_json(j.at("counts_ep"), CountUnit::events);
        r.counts_dur = counts_from_json(j.at("counts_dur"), CountUnit::samples);
        r.test_duration_s = j.at("test_duration_s").get<double>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::parse, kModule, std::string("malformed report JSON: ") + e.what());
    }
}

}  // namespace seizeval
