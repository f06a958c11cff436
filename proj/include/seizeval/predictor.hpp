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
#include "seizeval/timeline.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace seizeval {

enum class PredictorKind { tree_ensemble, threshold_baseline };

std::string_view to_string(PredictorKind kind) noexcept;
PredictorKind parse_predictor_kind(std::string_view text);

struct PredictorConfig {
    PredictorKind kind = PredictorKind::tree_ensemble;
    int n_trees = 100;
    std::optional<int> max_depth;
    /// Split thresholds are searched on per-feature quantile bin edges.
    int max_bins = 64;
    std::uint64_t rng_seed = 0;
    /// Column name, or a bare feature name (e.g. "line_length") meaning the
    /// mean of that feature over all channels.
    std::string threshold_feature = "line_length";
    double threshold_value = 0.0;

    void validate() const;
};

/// Array-encoded binary tree; a node with feature < 0 is a leaf.
struct TreeNode {
    std::int32_t feature = -1;
    float threshold = 0.0f;  ///< go left iff value <= threshold
    std::int32_t left = -1;
    std::int32_t right = -1;
    Label label = kBackground;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;

    Label predict(std::span<const float> row) const;
    std::size_t depth() const;
};

class Model {
public:
    const PredictorConfig& config() const noexcept { return config_; }
    const std::vector<std::string>& columns() const noexcept { return columns_; }
    const std::vector<DecisionTree>& trees() const noexcept { return trees_; }

    friend Model fit(const FeatureMatrix& train, const PredictorConfig& cfg, int jobs);
    friend Model model_from_json(const nlohmann::json& j);
    friend nlohmann::ordered_json to_json(const Model& model);

private:
    PredictorConfig config_;
    std::vector<std::string> columns_;
    std::vector<DecisionTree> trees_;
    std::vector<std::size_t> threshold_columns_;
};

/// Trains a model. The tree ensemble bootstraps rows per tree, draws
/// floor(sqrt(n_features)) candidate features per split, uses Gini impurity and
/// votes by strict majority. Deterministic given rng_seed regardless of jobs.
Model fit(const FeatureMatrix& train, const PredictorConfig& cfg, int jobs = 1);

/// One label per row of `test`. Columns must match the training columns.
std::vector<Label> predict(const Model& model, const FeatureMatrix& test, int jobs = 1);

nlohmann::ordered_json to_json(const Model& model);
Model model_from_json(const nlohmann::json& j);

}  // namespace seizeval
