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

#include "seizeval/features.hpp"
#include "seizeval/metrics.hpp"
#include "seizeval/partition.hpp"
#include "seizeval/postprocess.hpp"
#include "seizeval/predictor.hpp"
#include "seizeval/recording.hpp"
#include "seizeval/synthgen.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace seizeval {

inline constexpr const char* kToolVersion = "0.1.0";

enum class ArrangementKind { fact_k, stos, win_h };

struct Arrangement {
    ArrangementKind kind = ArrangementKind::fact_k;
    int factor_k = 1;
    FixedWindowConfig window;

    /// fact<k>, stos or win<h>h.
    std::string name() const;
};

std::string_view to_string(ArrangementKind kind) noexcept;
/// fact_k | stos | win_h (also accepts the short forms fact, win).
ArrangementKind parse_arrangement_kind(std::string_view text);

struct DataSource {
    enum class Kind { synthetic, directory };
    Kind kind = Kind::synthetic;
    SynthConfig synth;
    std::filesystem::path dir;
    /// Channels to load from a directory; empty keeps all.
    std::vector<std::string> channels;
};

struct BandpassConfig {
    double lo_hz = 1.0;
    double hi_hz = 20.0;
    int order = 4;
};

struct ExperimentConfig {
    DataSource source;
    Arrangement arrangement;
    CvScheme cv = CvScheme::l1o;
    Scope scope = Scope::personalized;
    WindowingConfig windowing;
    PostprocessConfig postprocess;
    PredictorConfig predictor;
    Aggregation aggregation = Aggregation::fold_average;
    BandpassConfig bandpass;
    std::filesystem::path out_dir;  ///< empty: nothing is written
    std::uint64_t seed = 1;
    int jobs = 1;
    /// Negative-control runs: rotate each training file's window labels by a
    /// random offset, destroying their alignment with the signal.
    std::optional<std::uint64_t> label_permutation_seed;

    void validate() const;
};

nlohmann::ordered_json to_json(const ExperimentConfig& cfg);

/// Loaded and band-pass filtered signals, reusable across runs that only
/// differ downstream of filtering.
struct PreparedData {
    std::vector<SubjectLayout> layouts;
    std::vector<SubjectSignals> signals;
    BandpassConfig bandpass;
    DataSource source;

    const SubjectSignals& signals_of(const std::string& subject) const;
};

PreparedData prepare_data(const DataSource& source, const BandpassConfig& bandpass, int jobs = 1);

/// Same, from recordings already in memory (consumed).
PreparedData prepare_data(RecordingSet set, const BandpassConfig& bandpass, int jobs = 1);

struct FoldResult {
    std::string subject_id;
    std::size_t index = 0;  ///< position in the FoldPlan
    std::vector<std::string> test_files;
    FoldCounts counts;
    ScoreReport report;
    std::vector<Annotation> detections;  ///< post-processed, file-relative
};

struct SubjectResult {
    std::string subject_id;
    ScoreReport report;
};

struct RunResult {
    FoldPlan plan;
    std::vector<FoldResult> folds;
    std::vector<SubjectResult> subjects;
    ScoreReport average;  ///< mean over subjects
};

/// Arrangement files for the prepared subjects.
std::vector<DataFile> build_arrangement(const Arrangement& arrangement, std::span<const SubjectLayout> layouts,
                                        std::uint64_t seed);

/// partition -> features -> fit/predict per fold -> postprocess -> score ->
/// aggregate per subject -> mean over subjects. Writes artifacts when
/// cfg.out_dir is set; an INCOMPLETE marker stays behind if the run fails.
RunResult run_experiment(const ExperimentConfig& cfg, const PreparedData& data);

/// Loads the data named by cfg.source and runs.
RunResult run_experiment(const ExperimentConfig& cfg);

nlohmann::ordered_json to_json(const RunResult& result, const ExperimentConfig& cfg);

/// folds.csv, subjects.csv, detections.csv, report.json, foldplan.json and panel.svg.
void write_run_outputs(const std::filesystem::path& dir, const RunResult& result, const ExperimentConfig& cfg);

inline constexpr const char* kIncompleteMarker = "INCOMPLETE";

}  // namespace seizeval
