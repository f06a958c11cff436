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

// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run all criteria
//   acceptance 1 4 7      run a subset
//
// Tolerances are fixed constants below; nothing adapts to the data.

#include "oracles.hpp"

#include "seizeval/edf.hpp"
#include "seizeval/error.hpp"
#include "seizeval/experiment.hpp"
#include "seizeval/features.hpp"
#include "seizeval/filter.hpp"
#include "seizeval/metrics.hpp"
#include "seizeval/partition.hpp"
#include "seizeval/postprocess.hpp"
#include "seizeval/rng.hpp"
#include "seizeval/synthgen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace seizeval;

namespace {

constexpr double kCountTol = 1e-12;
constexpr double kMetricRuntimeLimit_s = 60.0;
constexpr double kStopbandDb = 60.0;
constexpr double kPassbandTol = 0.05;
constexpr double kRelPowerTol = 1e-9;
constexpr double kMinF1 = 0.9;
constexpr double kPermAlpha = 0.05;
constexpr int kPermutations = 39;
constexpr std::uint64_t kSeed = 1;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

/// Collects failures inside one criterion; the first few are printed.
struct Check {
    std::vector<std::string> failures;
    void require(bool ok, const std::string& what)
    {
        if (!ok) failures.push_back(what);
    }
    bool ok() const { return failures.empty(); }
};

bool close(double a, double b, double tol = kCountTol) { return std::abs(a - b) <= tol; }

bool same_counts(const MetricCounts& a, const MetricCounts& b, double tol)
{
    return close(a.tp, b.tp, tol) && close(a.fp, b.fp, tol) && close(a.fn, b.fn, tol) && close(a.tn, b.tn, tol);
}

bool all_finite(const ScoreReport& r)
{
    for (double v : {r.sensitivity_ep, r.precision_ep, r.f1_ep, r.sensitivity_dur, r.precision_dur, r.f1_dur, r.f1_de,
                     r.far_per_day})
        if (!std::isfinite(v)) return false;
    return true;
}

// 1 -------------------------------------------------------------------------

std::string criterion_metric_oracles(Check& chk)
{
    const auto t0 = Clock::now();
    Rng rng(kSeed);
    const double fs_choices[] = {1.0, 4.0, 256.0};
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng.below(10000);
        const double fs = fs_choices[rng.below(3)];
        const auto ref = oracle::random_labels(rng, n);
        const auto hyp = oracle::random_labels(rng, n);
        const LabelSeries rs(ref, fs), hs(hyp, fs);

        const auto dur = score_duration(rs, hs);
        const auto dur_o = oracle::duration_counts(ref, hyp);
        chk.require(same_counts(dur, dur_o, 0.0), "duration counts differ in trial " + std::to_string(trial));

        const auto re = oracle::runs(ref, fs), he = oracle::runs(hyp, fs);
        const auto ep = score_episode(labels_to_events(rs), labels_to_events(hs));
        chk.require(same_counts(ep, oracle::episode_counts(re, he), kCountTol),
                    "episode counts differ in trial " + std::to_string(trial));
        const auto ta = score_taes(labels_to_events(rs), labels_to_events(hs));
        chk.require(same_counts(ta, oracle::taes_counts(re, he), kCountTol),
                    "TAES counts differ in trial " + std::to_string(trial));
    }
    const double elapsed = seconds_since(t0);
    chk.require(elapsed < kMetricRuntimeLimit_s, "runtime " + std::to_string(elapsed) + " s");
    char buf[128];
    std::snprintf(buf, sizeof buf, "1000 random pairs, %.1f s", elapsed);
    return buf;
}

// 2 -------------------------------------------------------------------------

struct Fixture {
    std::string name;
    std::vector<Event> ref;
    double duration_s;
    double fs;
};

std::vector<Fixture> boundary_fixtures()
{
    return {
        {"empty file", {}, 60, 1},
        {"one sample seizure", {{10, 11}}, 60, 1},
        {"seizure at start", {{0, 10}}, 60, 1},
        {"seizure at end", {{50, 60}}, 60, 1},
        {"whole file seizure", {{0, 60}}, 60, 1},
        {"two seizures", {{10, 20}, {40, 50}}, 60, 1},
        {"touching seizures", {{10, 20}, {20, 30}}, 60, 1},
        {"many short seizures", {{1, 2}, {3, 4}, {5, 6}, {7, 8}, {9, 10}}, 12, 1},
        {"high fs single", {{1.5, 2.25}}, 4, 256},
        {"high fs two", {{0.5, 1.0}, {2.0, 3.5}}, 4, 256},
        {"long file one seizure", {{3600, 3660}}, 7200, 1},
        {"day-long file", {{100, 200}, {50000, 50100}}, 86400, 1},
        {"sub-second seizure", {{0.25, 0.5}}, 2, 8},
        {"alternating", {{0, 1}, {2, 3}, {4, 5}, {6, 7}}, 8, 1},
        {"single-sample file seizure", {{0, 1}}, 1, 1},
        {"single-sample file empty", {}, 1, 1},
        {"seizure leaving one free sample", {{0, 59}}, 60, 1},
        {"late short seizure", {{59, 60}}, 60, 1},
        {"ten seizures", {{0, 2}, {5, 7}, {10, 12}, {15, 17}, {20, 22}, {25, 27}, {30, 32}, {35, 37}, {40, 42}, {45, 47}},
         50, 1},
        {"fractional fs", {{2, 4}}, 10, 0.5},
        {"mid-file long", {{100, 900}}, 1000, 2},
    };
}

std::string criterion_boundaries(Check& chk)
{
    const auto fixtures = boundary_fixtures();
    for (const auto& fx : fixtures) {
        const LabelSeries ref = events_to_labels(fx.ref, fx.fs, fx.duration_s);
        std::vector<Label> comp(ref.size());
        for (std::size_t i = 0; i < ref.size(); ++i) comp[i] = ref[i] ? 0 : 1;
        const LabelSeries disjoint(comp, fx.fs);
        const LabelSeries zeros(std::vector<Label>(ref.size(), 0), fx.fs);
        const LabelSeries ones(std::vector<Label>(ref.size(), 1), fx.fs);

        const auto report_of = [&](const LabelSeries& hyp) {
            const auto c = count_file(ref, hyp);
            return finalize_report(c.dur, c.ep, c.duration_s);
        };
        const auto perfect = report_of(ref);
        for (double v : {perfect.sensitivity_ep, perfect.precision_ep, perfect.f1_ep, perfect.sensitivity_dur,
                         perfect.precision_dur, perfect.f1_dur, perfect.f1_de})
            chk.require(v == 1.0, fx.name + ": perfect prediction rate != 1");
        chk.require(perfect.far_per_day == 0.0, fx.name + ": perfect prediction FAR != 0");

        const auto refs = labels_to_events(ref), hyps = labels_to_events(ref);
        const auto ta = score_taes(refs, hyps);
        chk.require(ta.fn == 0.0 && ta.fp == 0.0 && ta.tp == static_cast<double>(refs.size()),
                    fx.name + ": TAES of perfect prediction");

        const auto dis = report_of(disjoint);
        chk.require(dis.sensitivity_ep == 0.0 && dis.sensitivity_dur == 0.0, fx.name + ": disjoint sensitivity != 0");
        chk.require(score_taes(refs, labels_to_events(disjoint)).tp == 0.0, fx.name + ": disjoint TAES tp != 0");

        for (const auto* hyp : {&ref, &disjoint, &zeros, &ones})
            chk.require(all_finite(report_of(*hyp)), fx.name + ": non-finite metric");
    }

    // Two reference and two hypothesis events, one pair overlapping.
    const std::vector<Event> ref{{10, 20}, {40, 50}}, hyp{{12, 18}, {25, 30}};
    const auto ep = score_episode(ref, hyp);
    const auto r = finalize_report(MetricCounts{}, ep, 60);
    chk.require(ep.tp == 1 && ep.fn == 1 && ep.fp == 1, "two-event fixture counts");
    chk.require(r.sensitivity_ep == 0.5 && r.precision_ep == 0.5, "two-event fixture TPR/PPV != 0.5");

    // Zero-denominator conventions.
    const auto fp_only = finalize_report(MetricCounts{0, 3, 0, 7}, MetricCounts{0, 2, 0, 0, CountUnit::events}, 100);
    chk.require(fp_only.sensitivity_ep == 0.0 && fp_only.sensitivity_dur == 0.0 && all_finite(fp_only),
                "fp-only counts: sensitivity must be 0");
    const auto fn_only = finalize_report(MetricCounts{0, 0, 3, 7}, MetricCounts{0, 0, 2, 0, CountUnit::events}, 100);
    chk.require(fn_only.precision_ep == 0.0 && fn_only.precision_dur == 0.0 && all_finite(fn_only),
                "fn-only counts: precision must be 0");
    return std::to_string(fixtures.size()) + " fixtures plus the two-event fixture";
}

// 3 -------------------------------------------------------------------------

SeriesPair duration_fold(std::size_t tp, std::size_t fp)
{
    std::vector<Label> ref(tp + fp, 0), hyp(tp + fp, 1);
    std::fill(ref.begin(), ref.begin() + static_cast<std::ptrdiff_t>(tp), 1);
    return {LabelSeries(ref, 1.0), LabelSeries(hyp, 1.0)};
}

std::string criterion_aggregation(Check& chk)
{
    const std::vector<SeriesPair> folds{duration_fold(90, 10), duration_fold(1, 9)};
    const auto avg = aggregate_folds(folds, Aggregation::fold_average);
    const auto pooled = aggregate_folds(folds, Aggregation::pooled);
    chk.require(avg.precision_dur == 0.5, "fold_average precision " + format_double(avg.precision_dur));
    chk.require(close(pooled.precision_dur, 91.0 / 110.0), "pooled precision " + format_double(pooled.precision_dur));

    Rng rng(kSeed);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 100 + rng.below(2000);
        const SeriesPair p{LabelSeries(oracle::random_labels(rng, n), 4.0),
                           LabelSeries(oracle::random_labels(rng, n), 4.0)};
        const std::vector<SeriesPair> one{p};
        chk.require(aggregate_folds(one, Aggregation::fold_average) == aggregate_folds(one, Aggregation::pooled),
                    "single fold modes differ");
        const std::vector<SeriesPair> ten(10, p);
        const auto a = aggregate_folds(ten, Aggregation::fold_average);
        const auto b = aggregate_folds(ten, Aggregation::pooled);
        chk.require(close(a.f1_ep, b.f1_ep) && close(a.f1_dur, b.f1_dur) && close(a.precision_dur, b.precision_dur) &&
                        close(a.sensitivity_ep, b.sensitivity_ep),
                    "identical folds: modes differ");
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "fold_average %.6f, pooled %.6f", avg.precision_dur, pooled.precision_dur);
    return buf;
}

// 4 -------------------------------------------------------------------------

std::string criterion_postprocess(Check& chk)
{
    Rng rng(kSeed);
    for (int trial = 0; trial < 10000; ++trial) {
        PostprocessConfig cfg;
        cfg.merge_gap_s = static_cast<double>(rng.below(60));
        cfg.min_event_s = rng.below(4) == 0 ? static_cast<double>(rng.below(20)) : 0.0;
        const auto ev = oracle::random_events(rng, 30, 3600);
        const auto once = merge_close_events(ev, cfg);
        const auto twice = merge_close_events(once, cfg);
        chk.require(once == twice, "merge not idempotent in trial " + std::to_string(trial));
        chk.require(once.size() <= ev.size(), "merge grew the event count");
        for (std::size_t i = 1; i < once.size(); ++i)
            chk.require(once[i].start() - once[i - 1].end() >= cfg.merge_gap_s, "gap below merge_gap_s");
        chk.require(once == oracle::merge_fixpoint(ev, cfg.merge_gap_s, cfg.min_event_s),
                    "merge differs from fixpoint oracle in trial " + std::to_string(trial));
    }
    for (int trial = 0; trial < 1000; ++trial) {
        const double fs = static_cast<double>(1 + rng.below(16));
        const std::size_t n = rng.below(3000);
        PostprocessConfig cfg;
        cfg.smooth_window_s = static_cast<double>(1 + rng.below(40)) / fs;
        const auto x = oracle::random_labels(rng, n);
        const auto got = smooth_majority(LabelSeries(x, fs), cfg);
        const auto w = static_cast<std::size_t>(std::llround(cfg.smooth_window_s * fs));
        const auto want = oracle::windowed_majority(x, w);
        chk.require(std::vector<Label>(got.labels().begin(), got.labels().end()) == want,
                    "smoothing differs from oracle in trial " + std::to_string(trial));
    }
    return "10000 event lists, 1000 series";
}

// 5 -------------------------------------------------------------------------

SubjectLayout random_layout(Rng& rng, const std::string& id)
{
    SubjectLayout l;
    l.subject_id = id;
    l.fs = static_cast<double>(std::vector<int>{32, 64, 128, 256}[rng.below(4)]);
    l.n_channels = 1;
    const std::size_t n_files = 10 + rng.below(10);
    std::size_t off = 0;
    for (std::size_t f = 0; f < n_files; ++f) {
        l.recording_ids.push_back(id + "_" + std::to_string(f));
        l.recording_offsets.push_back(off);
        off += static_cast<std::size_t>((1800 + rng.below(1800)) * l.fs);
    }
    l.n_samples = off;
    const double total = l.duration_s();
    const std::size_t n_seiz = 2 + rng.below(5);
    double t = 0.0;
    for (std::size_t k = 0; k < n_seiz; ++k) {
        const double start = t + 300 + static_cast<double>(rng.below(static_cast<std::uint64_t>(total / n_seiz)));
        const double len = 10.0 + static_cast<double>(rng.below(100));
        if (start + len + 300 > total) break;
        l.seizures.emplace_back(start, start + len);
        t = start + len;
    }
    if (l.seizures.empty()) l.seizures.emplace_back(600, 660);
    return l;
}

bool exact_partition(const std::vector<DataFile>& files, const SubjectLayout& l)
{
    std::vector<TimelineSpan> spans;
    for (const auto& f : files)
        if (f.meta.subject_id == l.subject_id) spans.insert(spans.end(), f.payload.begin(), f.payload.end());
    std::sort(spans.begin(), spans.end(), [](auto a, auto b) { return a.begin < b.begin; });
    std::size_t at = 0;
    for (const auto& s : spans) {
        if (s.begin != at || s.end <= s.begin) return false;
        at = s.end;
    }
    return at == l.n_samples;
}

std::map<std::string, const DataFile*> index_files(const std::vector<DataFile>& files)
{
    std::map<std::string, const DataFile*> out;
    for (const auto& f : files) out[f.meta.file_id] = &f;
    return out;
}

void check_tscv(Check& chk, const FoldPlan& plan, const std::vector<DataFile>& files)
{
    const auto by_id = index_files(files);
    for (const auto& fold : plan.folds)
        for (const auto& tr : fold.train)
            for (const auto& te : fold.test) {
                const auto* a = by_id.at(tr);
                const auto* b = by_id.at(te);
                chk.require(a->meta.subject_id == b->meta.subject_id && a->meta.seq_index < b->meta.seq_index,
                            "TSCV precedence violated by " + tr + " -> " + te);
            }
}

void check_generalized(Check& chk, const FoldPlan& plan, const std::vector<DataFile>& files)
{
    const auto by_id = index_files(files);
    for (const auto& fold : plan.folds) {
        std::set<std::string> test_subjects;
        for (const auto& te : fold.test) test_subjects.insert(by_id.at(te)->meta.subject_id);
        for (const auto& tr : fold.train)
            chk.require(!test_subjects.count(by_id.at(tr)->meta.subject_id), "generalized fold shares a subject");
    }
}

std::string criterion_partition(Check& chk)
{
    Rng rng(kSeed);
    std::size_t n_files = 0;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<SubjectLayout> layouts;
        const std::size_t n_subjects = 2 + rng.below(3);
        for (std::size_t s = 0; s < n_subjects; ++s) layouts.push_back(random_layout(rng, "s" + std::to_string(s)));

        for (int k : {1, 2, 5, 10}) {
            const auto fact = build_fact_subset(layouts, k, rng.next());
            n_files += fact.size();
            for (const auto& f : fact) {
                double seizure_samples = 0.0;
                for (const auto& e : f.events) seizure_samples += e.duration() * f.meta.fs;
                const double expected = static_cast<double>(f.n_samples()) / (1.0 + k);
                chk.require(f.events.size() == 1 && std::abs(seizure_samples - expected) <= 1.0 + 1e-9,
                            "Fact-" + std::to_string(k) + " fraction off in " + f.meta.file_id);
            }
            check_tscv(chk, make_folds_tscv(fact), fact);
            check_generalized(chk, make_scope_generalized(fact), fact);
        }
        const auto stos = build_seizure_to_seizure(layouts);
        FixedWindowConfig wc;
        wc.window_h = std::vector<double>{0.5, 1.0, 4.0}[rng.below(3)];
        wc.first_fold_min_h = static_cast<double>(rng.below(6));
        const auto win = build_fixed_windows(layouts, wc);
        n_files += stos.size() + win.size();
        for (const auto& l : layouts) {
            chk.require(exact_partition(stos, l), "StoS is not an exact partition of " + l.subject_id);
            chk.require(exact_partition(win, l), "fixed windows are not an exact partition of " + l.subject_id);
        }
        for (const auto* files : {&stos, &win}) {
            const auto plan = make_folds_tscv(*files);
            check_tscv(chk, plan, *files);
            validate_plan(plan, *files);
            const auto gen = make_scope_generalized(*files);
            check_generalized(chk, gen, *files);
            validate_plan(gen, *files);
        }
    }
    return "50 random layout sets, " + std::to_string(n_files) + " files";
}

// 6 -------------------------------------------------------------------------

double rms_middle(const std::vector<double>& x)
{
    const std::size_t a = x.size() / 4, b = 3 * x.size() / 4;
    double s = 0.0;
    for (std::size_t i = a; i < b; ++i) s += x[i] * x[i];
    return std::sqrt(s / static_cast<double>(b - a));
}

std::vector<double> tone(double f, double fs, double seconds)
{
    std::vector<double> x(static_cast<std::size_t>(fs * seconds));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2.0 * std::numbers::pi * f * static_cast<double>(i) / fs);
    return x;
}

std::string criterion_filter(Check& chk)
{
    const double fs = 256.0;
    const auto in50 = tone(50, fs, 60), in5 = tone(5, fs, 60);
    const double att_db = 20.0 * std::log10(rms_middle(bandpass_filter(in50, fs, 1, 20, 4)) / rms_middle(in50));
    const double gain5 = rms_middle(bandpass_filter(in5, fs, 1, 20, 4)) / rms_middle(in5);
    chk.require(att_db <= -kStopbandDb, "50 Hz attenuation " + std::to_string(att_db) + " dB");
    chk.require(std::abs(gain5 - 1.0) <= kPassbandTol, "5 Hz gain " + std::to_string(gain5));

    Rng rng(kSeed);
    const auto bands = default_bands();
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> w(static_cast<std::size_t>(fs * 4));
        const double amp = std::pow(10.0, rng.uniform(-3, 3));
        const double f = rng.uniform(0.1, 60);
        for (std::size_t i = 0; i < w.size(); ++i)
            w[i] = amp * (rng.normal() * rng.uniform() + std::sin(2 * std::numbers::pi * f * static_cast<double>(i) / fs));
        const auto bp = band_powers(w, fs, bands);
        double sum = 0.0;
        for (double r : bp.relative) sum += r;
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    chk.require(worst <= kRelPowerTol, "relative band powers off by " + std::to_string(worst));
    char buf[160];
    std::snprintf(buf, sizeof buf, "50 Hz %.1f dB, 5 Hz gain %.4f, max |sum rel - 1| %.1e", att_db, gain5, worst);
    return buf;
}

// 7, 9 ----------------------------------------------------------------------

ExperimentConfig base_config()
{
    ExperimentConfig cfg;
    cfg.seed = kSeed;
    cfg.jobs = 1;
    return cfg;
}

ExperimentConfig with(ExperimentConfig cfg, const std::function<void(ExperimentConfig&)>& edit)
{
    edit(cfg);
    return cfg;
}

struct Lazy {
    std::optional<PreparedData> data;
    const PreparedData& get(const SynthConfig& synth)
    {
        if (!data) {
            DataSource src;
            src.synth = synth;
            const auto t0 = Clock::now();
            data = prepare_data(src, BandpassConfig{}, 1);
            std::printf("  prepared synthetic data (gain %g) in %.0f s\n", synth.seizure_gain, seconds_since(t0));
        }
        return *data;
    }
};

Lazy default_data;

RunResult run_logged(const std::string& name, const ExperimentConfig& cfg, const PreparedData& data)
{
    const auto t0 = Clock::now();
    auto r = run_experiment(cfg, data);
    std::printf("  %-22s F1ep %.3f  Sep %.3f  FAR/day %7.2f  FP %3.0f  (%.0f s)\n", name.c_str(), r.average.f1_ep,
                r.average.sensitivity_ep, r.average.far_per_day, r.average.counts_ep.fp, seconds_since(t0));
    std::fflush(stdout);
    return r;
}

std::optional<RunResult> fact1_l1o;

const RunResult& fact1_l1o_run()
{
    if (!fact1_l1o) {
        const auto cfg = base_config();
        fact1_l1o = run_logged("fact1 l1o", cfg, default_data.get(cfg.source.synth));
    }
    return *fact1_l1o;
}

std::string criterion_directions(Check& chk)
{
    const auto t0 = Clock::now();
    const auto base = base_config();
    const auto& data = default_data.get(base.source.synth);
    const auto& l1o = fact1_l1o_run();
    const auto tscv = run_logged("fact1 tscv", with(base, [](auto& c) { c.cv = CvScheme::tscv; }), data);

    const auto window_cfg = with(base, [](auto& c) {
        c.arrangement.kind = ArrangementKind::win_h;
        c.cv = CvScheme::tscv;
    });
    std::vector<double> fps;
    std::optional<RunResult> win;
    for (double wss : {0.5, 1.0, 2.0, 4.0}) {
        auto r = run_logged("win1h tscv wss " + format_double(wss),
                            with(window_cfg, [&](auto& c) { c.windowing.step_s = wss; }), data);
        fps.push_back(r.average.counts_ep.fp);
        if (!win) win = std::move(r);
    }
    const auto gen = run_logged("fact1 generalized", with(base, [](auto& c) { c.scope = Scope::generalized; }), data);

    chk.require(l1o.average.f1_ep >= tscv.average.f1_ep,
                "(a) L1O F1ep " + format_double(l1o.average.f1_ep) + " < TSCV " + format_double(tscv.average.f1_ep));
    chk.require(l1o.average.far_per_day >= win->average.far_per_day,
                "(b) Fact-1 FAR " + format_double(l1o.average.far_per_day) + " < full-data FAR " +
                    format_double(win->average.far_per_day));
    for (std::size_t i = 1; i < fps.size(); ++i)
        chk.require(fps[i] <= fps[i - 1], "(c) FP count rose with WSS");
    chk.require(l1o.average.f1_ep >= gen.average.f1_ep,
                "(d) personalized F1ep " + format_double(l1o.average.f1_ep) + " < generalized " +
                    format_double(gen.average.f1_ep));

    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "(a) %.3f >= %.3f (b) %.2f >= %.2f (c) FP %g/%g/%g/%g (d) %.3f >= %.3f; %.0f s",
                  l1o.average.f1_ep, tscv.average.f1_ep, l1o.average.far_per_day, win->average.far_per_day, fps[0],
                  fps[1], fps[2], fps[3], l1o.average.f1_ep, gen.average.f1_ep, seconds_since(t0));
    return buf;
}

// 8 -------------------------------------------------------------------------

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string criterion_determinism(Check& chk)
{
    // Reports: a small configuration run twice from scratch, plus the jobs-independence check.
    const auto tmp = std::filesystem::temp_directory_path() / "seizeval_acceptance_determinism";
    std::filesystem::remove_all(tmp);
    auto cfg = base_config();
    cfg.source.synth.n_subjects = 2;
    cfg.source.synth.hours_per_subject = 2;
    cfg.source.synth.n_channels = 4;
    cfg.predictor.n_trees = 20;
    const std::vector<std::string> outputs{"folds.csv", "subjects.csv", "report.json", "foldplan.json", "panel.svg"};
    std::vector<std::string> first;
    for (int run = 0; run < 3; ++run) {
        auto c = cfg;
        c.out_dir = tmp / ("run" + std::to_string(run));
        c.jobs = run == 2 ? 3 : 1;
        run_experiment(c);
        std::vector<std::string> contents;
        for (const auto& name : outputs) contents.push_back(slurp(c.out_dir / name));
        if (run == 0)
            first = contents;
        else
            for (std::size_t i = 0; i < outputs.size(); ++i)
                chk.require(contents[i] == first[i] && !contents[i].empty(),
                            outputs[i] + " differs on rerun " + std::to_string(run));
        chk.require(!std::filesystem::exists(c.out_dir / kIncompleteMarker), "INCOMPLETE marker left behind");
    }
    std::filesystem::remove_all(tmp);

    // EDF round trip at the digital level.
    Rng rng(kSeed);
    for (int trial = 0; trial < 20; ++trial) {
        EdfData d;
        d.header.patient_id = "X";
        d.header.recording_id = "trial " + std::to_string(trial);
        d.header.start_date = "01.01.26";
        d.header.start_time = "00.00.00";
        d.header.record_duration_s = 1.0;
        d.header.n_records = static_cast<std::int64_t>(1 + rng.below(5));
        const std::size_t ns = 1 + rng.below(4);
        for (std::size_t s = 0; s < ns; ++s) {
            auto sig = default_signal_header("C" + std::to_string(s), 1 + rng.below(300));
            d.header.signals.push_back(sig);
            std::vector<std::int16_t> v(sig.samples_per_record * static_cast<std::size_t>(d.header.n_records));
            for (auto& x : v) x = static_cast<std::int16_t>(static_cast<int>(rng.below(65536)) - 32768);
            d.digital.push_back(std::move(v));
        }
        d.header.header_bytes = 256 * (ns + 1);
        const auto bytes = write_edf(d);
        const auto back = parse_edf(bytes);
        chk.require(back.digital == d.digital, "EDF digital round trip differs");
        chk.require(write_edf(back) == bytes, "EDF rewrite differs");
    }

    // Fuzzing: random bytes and mutated valid files must fail cleanly.
    std::size_t rejected = 0, accepted = 0;
    EdfData base;
    base.header.record_duration_s = 1.0;
    base.header.n_records = 2;
    base.header.signals = {default_signal_header("A", 8), default_signal_header("B", 4)};
    base.header.header_bytes = 256 * 3;
    base.digital = {std::vector<std::int16_t>(16, 7), std::vector<std::int16_t>(8, -7)};
    const auto valid = write_edf(base);
    for (int trial = 0; trial < 20000; ++trial) {
        std::vector<std::uint8_t> bytes;
        if (trial % 2 == 0) {
            bytes.resize(rng.below(2000));
            for (auto& b : bytes) b = static_cast<std::uint8_t>(rng.below(256));
        } else {
            bytes = valid;
            const std::size_t edits = 1 + rng.below(8);
            for (std::size_t e = 0; e < edits; ++e) {
                const auto pos = rng.below(bytes.size());
                bytes[pos] = rng.below(2) ? static_cast<std::uint8_t>(rng.below(256))
                                          : static_cast<std::uint8_t>("0123456789 -+.e"[rng.below(15)]);
            }
            if (rng.below(3) == 0) bytes.resize(rng.below(bytes.size() + 1));
        }
        try {
            (void)parse_edf(bytes);
            ++accepted;
        } catch (const Error&) {
            ++rejected;
        } catch (const std::exception& e) {
            chk.require(false, std::string("fuzz input raised a non-library exception: ") + e.what());
        }
    }
    return "3 identical runs (jobs 1/1/3), 20 EDF round trips, 20000 fuzz inputs (" + std::to_string(rejected) +
           " rejected, " + std::to_string(accepted) + " parsed)";
}

std::string criterion_end_to_end(Check& chk)
{
    const auto t0 = Clock::now();
    const auto& r = fact1_l1o_run();
    chk.require(r.average.sensitivity_ep == 1.0, "episode sensitivity " + format_double(r.average.sensitivity_ep));
    chk.require(r.average.f1_ep >= kMinF1, "episode F1 " + format_double(r.average.f1_ep));
    default_data.data.reset();  // two full datasets do not fit in memory together

    // Negative control: seizures with no added rhythm, scored against
    // per-file rotations of the training labels through the same pipeline.
    auto null_cfg = base_config();
    null_cfg.source.synth.seizure_gain = 1.0;
    Lazy null_data;
    const auto& data = null_data.get(null_cfg.source.synth);
    const double observed = run_logged("null observed", null_cfg, data).average.f1_ep;
    std::vector<double> perm;
    for (int p = 0; p < kPermutations; ++p) {
        auto c = null_cfg;
        c.label_permutation_seed = static_cast<std::uint64_t>(1000 + p);
        perm.push_back(run_experiment(c, data).average.f1_ep);
    }
    std::size_t le = 0, ge = 0;
    for (double v : perm) {
        le += v <= observed;
        ge += v >= observed;
    }
    const double p_value = std::min(1.0, 2.0 * static_cast<double>(std::min(le, ge) + 1) / (kPermutations + 1));
    std::sort(perm.begin(), perm.end());
    chk.require(p_value > kPermAlpha, "negative control distinguishable from permutations, p = " + format_double(p_value));

    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "Sep %.3f F1ep %.3f; null F1ep %.3f vs permutations [%.3f, %.3f] median %.3f, p = %.3f; %.0f s",
                  r.average.sensitivity_ep, r.average.f1_ep, observed, perm.front(), perm.back(),
                  perm[perm.size() / 2], p_value, seconds_since(t0));
    return buf;
}

struct Criterion {
    int id;
    const char* title;
    std::string (*run)(Check&);
};

const Criterion kCriteria[] = {
    {1, "metric oracle equivalence", criterion_metric_oracles},
    {2, "metric boundary suite", criterion_boundaries},
    {3, "aggregation divergence", criterion_aggregation},
    {4, "post-processing laws", criterion_postprocess},
    {5, "partition laws", criterion_partition},
    {6, "filter and band powers", criterion_filter},
    {7, "direction of effect", criterion_directions},
    {8, "determinism and EDF robustness", criterion_determinism},
    {9, "end-to-end sanity and negative control", criterion_end_to_end},
};

}  // namespace

int main(int argc, char** argv)
{
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

    std::vector<std::string> lines;
    int failed = 0;
    for (const auto& c : kCriteria) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        std::printf("criterion %d: %s ...\n", c.id, c.title);
        std::fflush(stdout);
        Check chk;
        std::string detail;
        try {
            detail = c.run(chk);
        } catch (const std::exception& e) {
            chk.require(false, std::string("exception: ") + e.what());
        }
        for (std::size_t i = 0; i < chk.failures.size() && i < 5; ++i)
            std::printf("  failure: %s\n", chk.failures[i].c_str());
        if (chk.failures.size() > 5) std::printf("  ... %zu failures in total\n", chk.failures.size());
        char line[512];
        std::snprintf(line, sizeof line, "%s criterion %d: %s | %s", chk.ok() ? "PASS" : "FAIL", c.id, c.title,
                      detail.c_str());
        std::printf("%s\n", line);
        std::fflush(stdout);
        lines.push_back(line);
        failed += chk.ok() ? 0 : 1;
    }
    std::printf("\nsummary\n");
    for (const auto& l : lines) std::printf("%s\n", l.c_str());
    return failed == 0 ? 0 : 1;
}
