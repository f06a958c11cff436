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

#include "doctest.h"
#include "support.hpp"

#include "seizeval/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <set>

using namespace seizeval;

namespace {

ExperimentConfig small_config()
{
    ExperimentConfig cfg;
    cfg.source.synth.n_subjects = 2;
    cfg.source.synth.hours_per_subject = 2;
    cfg.source.synth.n_channels = 4;
    cfg.predictor.n_trees = 20;
    return cfg;
}

const PreparedData& small_data()
{
    static const PreparedData data = prepare_data(small_config().source, small_config().bandpass);
    return data;
}

}  // namespace

TEST_CASE("experiment config validation")
{
    auto cfg = small_config();
    cfg.arrangement.kind = ArrangementKind::win_h;
    CHECK(error_kind([&] { cfg.validate(); }) == ErrorKind::validation);
    cfg.cv = CvScheme::tscv;
    CHECK_NOTHROW(cfg.validate());
    cfg = small_config();
    cfg.jobs = 0;
    CHECK(error_kind([&] { cfg.validate(); }) == ErrorKind::validation);
    cfg = small_config();
    cfg.windowing.step_s = 0;
    CHECK(error_kind([&] { cfg.validate(); }) == ErrorKind::validation);
}

TEST_CASE("leave-one-seizure-out run structure")
{
    const auto r = run_experiment(small_config(), small_data());
    std::size_t seizures = 0;
    for (const auto& l : small_data().layouts) seizures += l.seizures.size();
    CHECK(r.folds.size() == seizures);
    CHECK(r.subjects.size() == 2);
    CHECK(r.average.f1_ep == doctest::Approx((r.subjects[0].report.f1_ep + r.subjects[1].report.f1_ep) / 2));
    for (const auto& f : r.folds) {
        REQUIRE(f.test_files.size() == 1);
        for (const auto& d : f.detections) {
            CHECK(d.file == f.test_files[0]);
            CHECK(d.subject == f.subject_id);
        }
    }
}

TEST_CASE("a failed run leaves the INCOMPLETE marker")
{
    const auto dir = std::filesystem::temp_directory_path() / "seizeval_incomplete_test";
    std::filesystem::remove_all(dir);
    auto cfg = small_config();
    cfg.out_dir = dir;
    cfg.arrangement.factor_k = 1000;  // more context than two hours hold
    CHECK(error_kind([&] { run_experiment(cfg, small_data()); }) == ErrorKind::capacity);
    CHECK(std::filesystem::exists(dir / kIncompleteMarker));

    cfg.arrangement.factor_k = 1;
    run_experiment(cfg, small_data());
    CHECK_FALSE(std::filesystem::exists(dir / kIncompleteMarker));
    for (const char* name : {"folds.csv", "subjects.csv", "detections.csv", "report.json", "foldplan.json", "panel.svg"})
        CHECK(std::filesystem::file_size(dir / name) > 0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("threshold baseline sweep")
{
    // On Fact-1 files any threshold low enough to flag everything gives
    // episode sensitivity 1.0 for free, so each subject's threshold is
    // chosen on duration F1, which punishes flagging the background.
    // Subjects differ in background amplitude, hence one sweep per subject.
    auto cfg = small_config();
    cfg.predictor.kind = PredictorKind::threshold_baseline;
    cfg.predictor.threshold_feature = "total_power";
    std::vector<ScoreReport> best(2);
    for (double t = 10.0; t < 1e5; t *= 1.5) {
        cfg.predictor.threshold_value = t;
        const auto r = run_experiment(cfg, small_data());
        for (std::size_t s = 0; s < 2; ++s)
            if (r.subjects[s].report.f1_dur > best[s].f1_dur) best[s] = r.subjects[s].report;
    }
    for (const auto& b : best) {
        CHECK(b.sensitivity_ep == 1.0);
        CHECK(b.f1_dur >= 0.85);
    }
}
