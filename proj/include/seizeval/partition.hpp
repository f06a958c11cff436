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

#include "seizeval/recording.hpp"
#include "seizeval/timeline.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace seizeval {

/// A unit of training/testing: a (possibly stitched) piece of one subject's
/// timeline. Events are file-relative seconds.
struct DataFile {
    RecordingMeta meta;
    std::vector<Event> events;
    std::vector<TimelineSpan> payload;  ///< concatenated in order to form the file's samples

    std::size_t n_samples() const noexcept;
};

enum class CvScheme { l1o, tscv };
enum class Scope { personalized, generalized };

std::string_view to_string(CvScheme scheme) noexcept;
std::string_view to_string(Scope scope) noexcept;
CvScheme parse_cv_scheme(std::string_view text);
Scope parse_scope(std::string_view text);

struct Fold {
    std::string subject_id;  ///< subject whose files are tested
    std::vector<std::string> train;
    std::vector<std::string> test;

    friend bool operator==(const Fold&, const Fold&) = default;
};

struct FoldPlan {
    CvScheme scheme = CvScheme::l1o;
    Scope scope = Scope::personalized;
    std::vector<Fold> folds;

    friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

/// Non-seizure context of a Fact-k file is drawn at least this far from any seizure.
inline constexpr double kFactGuardSeconds = 60.0;

/// One file per seizure: the seizure centred between two contiguous
/// non-seizure blocks totalling factor_k times its length. Blocks are drawn
/// without overlap from anywhere in the subject's seizure-free timeline.
std::vector<DataFile> build_fact_subset(std::span<const SubjectLayout> subjects, int factor_k, std::uint64_t rng_seed,
                                        double guard_s = kFactGuardSeconds);

/// Files run from the end of one seizure to the end of the next. Data after
/// the last seizure is appended to the last file so that files still
/// partition the timeline exactly.
std::vector<DataFile> build_seizure_to_seizure(std::span<const SubjectLayout> subjects);

struct FixedWindowConfig {
    double window_h = 1.0;
    double first_fold_min_h = 5.0;
    std::size_t first_fold_min_seizures = 1;
};

/// Fixed-length slices. The first file covers at least first_fold_min_h and
/// first_fold_min_seizures, growing from the minimum in whole windows; the
/// final partial slice is kept.
std::vector<DataFile> build_fixed_windows(std::span<const SubjectLayout> subjects, const FixedWindowConfig& cfg);

/// Per subject, fold i tests file i and trains on all the subject's other files.
FoldPlan make_folds_l1o(std::span<const DataFile> files);

/// Per subject with files ordered by seq_index, fold i trains on files
/// [0, i] and tests file i + 1.
FoldPlan make_folds_tscv(std::span<const DataFile> files);

/// Leave-one-subject-out: one fold per subject.
FoldPlan make_scope_generalized(std::span<const DataFile> files);

/// The single leave-one-subject-out fold testing `test_subject`.
FoldPlan make_scope_generalized(std::span<const DataFile> files, const std::string& test_subject);

/// Throws a validation error if any FoldPlan invariant fails: train/test
/// disjointness, TSCV temporal precedence, generalized subject disjointness.
void validate_plan(const FoldPlan& plan, std::span<const DataFile> files);

nlohmann::ordered_json to_json(const FoldPlan& plan);
FoldPlan plan_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const DataFile& file);

}  // namespace seizeval
