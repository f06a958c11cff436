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

#include "seizeval/predictor.hpp"

#include "seizeval/error.hpp"
#include "seizeval/parallel.hpp"
#include "seizeval/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace seizeval {

namespace {

constexpr const char* kModule = "predictor";

// Column-major bin codes plus per-feature split thresholds. Code c of a value
// means it is <= thresholds[c] and > thresholds[c-1].
struct BinnedData {
    std::size_t n_rows = 0;
    std::size_t n_features = 0;
    std::vector<std::uint8_t> codes;
    std::vector<std::vector<float>> thresholds;

    const std::uint8_t* column(std::size_t f) const { return codes.data() + f * n_rows; }
};

BinnedData bin_features(const FeatureMatrix& m, int max_bins, int jobs)
{
    BinnedData b;
    b.n_rows = m.rows();
    b.n_features = m.cols();
    b.codes.resize(b.n_rows * b.n_features);
    b.thresholds.resize(b.n_features);

    parallel_for(b.n_features, jobs, [&](std::size_t f) {
        std::vector<float> col(b.n_rows);
        for (std::size_t r = 0; r < b.n_rows; ++r) col[r] = m.at(r, f);
        std::vector<float> sorted = col;
        std::sort(sorted.begin(), sorted.end());

        // Candidate cut values: every distinct value below the maximum when
        // there are few, quantiles otherwise.
        std::vector<float> cuts;
        std::vector<float> uniq = sorted;
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        if (uniq.size() <= static_cast<std::size_t>(max_bins)) {
            cuts.assign(uniq.begin(), uniq.end() - (uniq.empty() ? 0 : 1));
        } else {
            for (int q = 1; q < max_bins; ++q) {
                const float v = sorted[static_cast<std::size_t>(q) * b.n_rows / static_cast<std::size_t>(max_bins)];
                if (v < uniq.back() && (cuts.empty() || v > cuts.back())) cuts.push_back(v);
            }
        }
        // Thresholds sit halfway to the next distinct value.
        auto& th = b.thresholds[f];
        th.reserve(cuts.size());
        for (float c : cuts) {
            const float next = *std::upper_bound(uniq.begin(), uniq.end(), c);
            float mid = static_cast<float>((static_cast<double>(c) + static_cast<double>(next)) / 2.0);
            if (!(mid >= c && mid < next)) mid = c;
            th.push_back(mid);
        }
        std::uint8_t* dst = b.codes.data() + f * b.n_rows;
        for (std::size_t r = 0; r < b.n_rows; ++r)
            dst[r] = static_cast<std::uint8_t>(std::lower_bound(th.begin(), th.end(), col[r]) - th.begin());
    });
    return b;
}

struct PendingNode {
    std::int32_t id;
    std::size_t begin;
    std::size_t end;
    std::size_t depth;
};

DecisionTree grow_tree(const BinnedData& data, std::span<const Label> labels, const PredictorConfig& cfg,
                       std::size_t tree_index)
{
    Rng rng = Rng::derive(cfg.rng_seed, tree_index);
    const std::size_t n = data.n_rows;

    std::vector<std::uint32_t> weight(n, 0);
    for (std::size_t i = 0; i < n; ++i) ++weight[rng.below(n)];
    std::vector<std::uint32_t> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        if (weight[i] > 0) rows.push_back(static_cast<std::uint32_t>(i));

    const std::size_t p = data.n_features;
    const std::size_t mtry = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(double(p)))));
    std::vector<std::size_t> feature_order(p);
    std::iota(feature_order.begin(), feature_order.end(), 0);

    const std::size_t max_depth =
        cfg.max_depth ? static_cast<std::size_t>(*cfg.max_depth) : std::numeric_limits<std::size_t>::max();

    DecisionTree tree;
    tree.nodes.emplace_back();
    std::vector<PendingNode> stack{{0, 0, rows.size(), 0}};
    std::vector<double> hist;

    while (!stack.empty()) {
        const PendingNode node = stack.back();
        stack.pop_back();

        double w[2] = {0.0, 0.0};
        for (std::size_t i = node.begin; i < node.end; ++i) w[labels[rows[i]]] += weight[rows[i]];
        tree.nodes[node.id].label = w[1] > w[0] ? kSeizure : kBackground;
        if (w[0] == 0.0 || w[1] == 0.0 || node.depth >= max_depth || w[0] + w[1] < 2.0) continue;

        for (std::size_t k = 0; k < mtry; ++k) std::swap(feature_order[k], feature_order[k + rng.below(p - k)]);

        double best_score = -1.0;
        std::size_t best_feature = 0;
        std::size_t best_cut = 0;
        for (std::size_t k = 0; k < mtry; ++k) {
            const std::size_t f = feature_order[k];
            const std::size_t n_cuts = data.thresholds[f].size();
            if (n_cuts == 0) continue;
            hist.assign(2 * (n_cuts + 1), 0.0);
            const std::uint8_t* col = data.column(f);
            for (std::size_t i = node.begin; i < node.end; ++i) {
                const auto r = rows[i];
                hist[2 * col[r] + labels[r]] += weight[r];
            }
            double l0 = 0.0, l1 = 0.0;
            for (std::size_t c = 0; c < n_cuts; ++c) {
                l0 += hist[2 * c];
                l1 += hist[2 * c + 1];
                const double r0 = w[0] - l0;
                const double r1 = w[1] - l1;
                const double lw = l0 + l1;
                const double rw = r0 + r1;
                if (lw == 0.0 || rw == 0.0) continue;
                const double score = (l0 * l0 + l1 * l1) / lw + (r0 * r0 + r1 * r1) / rw;
                if (score > best_score) {
                    best_score = score;
                    best_feature = f;
                    best_cut = c;
                }
            }
        }
        if (best_score < 0.0) continue;

        const std::uint8_t* col = data.column(best_feature);
        const auto mid = std::partition(rows.begin() + static_cast<std::ptrdiff_t>(node.begin),
                                        rows.begin() + static_cast<std::ptrdiff_t>(node.end),
                                        [&](std::uint32_t r) { return col[r] <= best_cut; });
        const auto split = static_cast<std::size_t>(mid - rows.begin());

        const auto left = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        const auto right = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        auto& parent = tree.nodes[node.id];
        parent.feature = static_cast<std::int32_t>(best_feature);
        parent.threshold = data.thresholds[best_feature][best_cut];
        parent.left = left;
        parent.right = right;
        stack.push_back({right, split, node.end, node.depth + 1});
        stack.push_back({left, node.begin, split, node.depth + 1});
    }
    return tree;
}

std::vector<std::size_t> resolve_threshold_columns(const std::vector<std::string>& columns, const std::string& name)
{
    for (std::size_t c = 0; c < columns.size(); ++c)
        if (columns[c] == name) return {c};
    std::vector<std::size_t> matches;
    const std::string suffix = "_" + name;
    for (std::size_t c = 0; c < columns.size(); ++c)
        if (columns[c].size() > suffix.size() &&
            columns[c].compare(columns[c].size() - suffix.size(), suffix.size(), suffix) == 0)
            matches.push_back(c);
    if (matches.empty()) fail(ErrorKind::schema, kModule, "no feature column matches '" + name + "'");
    return matches;
}

double threshold_score(std::span<const float> row, std::span<const std::size_t> cols)
{
    double sum = 0.0;
    for (auto c : cols) sum += row[c];
    return sum / static_cast<double>(cols.size());
}

}  // namespace

std::string_view to_string(PredictorKind kind) noexcept
{
    return kind == PredictorKind::tree_ensemble ? "tree_ensemble" : "threshold_baseline";
}

PredictorKind parse_predictor_kind(std::string_view text)
{
    if (text == "tree_ensemble") return PredictorKind::tree_ensemble;
    if (text == "threshold_baseline") return PredictorKind::threshold_baseline;
    fail(ErrorKind::parse, kModule, "unknown predictor kind '" + std::string(text) + "'");
}

void PredictorConfig::validate() const
{
    if (kind == PredictorKind::tree_ensemble && n_trees < 1) fail(ErrorKind::validation, kModule, "n_trees must be >= 1");
    if (max_depth && *max_depth < 0) fail(ErrorKind::validation, kModule, "max_depth must be >= 0");
    if (max_bins < 2 || max_bins > 256) fail(ErrorKind::validation, kModule, "max_bins must be in [2, 256]");
}

Label DecisionTree::predict(std::span<const float> row) const
{
    std::size_t i = 0;
    while (nodes[i].feature >= 0)
        i = static_cast<std::size_t>(row[static_cast<std::size_t>(nodes[i].feature)] <= nodes[i].threshold
                                         ? nodes[i].left
                                         : nodes[i].right);
    return nodes[i].label;
}

std::size_t DecisionTree::depth() const
{
    std::vector<std::size_t> d(nodes.size(), 0);
    std::size_t deepest = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        deepest = std::max(deepest, d[i]);
        if (nodes[i].feature >= 0) {
            d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
            d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
        }
    }
    return deepest;
}

Model fit(const FeatureMatrix& train, const PredictorConfig& cfg, int jobs)
{
    cfg.validate();
    Model model;
    model.config_ = cfg;
    model.columns_ = train.columns;

    if (cfg.kind == PredictorKind::threshold_baseline) {
        model.threshold_columns_ = resolve_threshold_columns(train.columns, cfg.threshold_feature);
        return model;
    }

    if (train.rows() == 0) fail(ErrorKind::training, kModule, "empty training set");
    const auto positives = static_cast<std::size_t>(std::count(train.labels.begin(), train.labels.end(), kSeizure));
    if (positives == 0 || positives == train.rows())
        fail(ErrorKind::training, kModule,
             "training set holds a single class; use the threshold_baseline predictor for such folds");

    const BinnedData data = bin_features(train, cfg.max_bins, jobs);
    model.trees_.resize(static_cast<std::size_t>(cfg.n_trees));
    parallel_for(model.trees_.size(), jobs,
                 [&](std::size_t t) { model.trees_[t] = grow_tree(data, train.labels, cfg, t); });
    return model;
}

std::vector<Label> predict(const Model& model, const FeatureMatrix& test, int jobs)
{
    if (test.rows() > 0 && test.columns != model.columns())
        fail(ErrorKind::schema, kModule, "test feature columns do not match the training columns");
    std::vector<Label> out(test.rows(), kBackground);
    if (test.rows() == 0) return out;

    if (model.config().kind == PredictorKind::threshold_baseline) {
        const auto cols = resolve_threshold_columns(model.columns(), model.config().threshold_feature);
        for (std::size_t r = 0; r < test.rows(); ++r)
            out[r] = threshold_score(test.row(r), cols) > model.config().threshold_value ? kSeizure : kBackground;
        return out;
    }

    const std::size_t chunk = 4096;
    const std::size_t n_chunks = (test.rows() + chunk - 1) / chunk;
    const auto& trees = model.trees();
    parallel_for(n_chunks, jobs, [&](std::size_t k) {
        const std::size_t end = std::min(test.rows(), (k + 1) * chunk);
        for (std::size_t r = k * chunk; r < end; ++r) {
            std::size_t votes = 0;
            const auto row = test.row(r);
            for (const auto& t : trees) votes += t.predict(row);
            out[r] = 2 * votes > trees.size() ? kSeizure : kBackground;
        }
    });
    return out;
}

nlohmann::ordered_json to_json(const Model& model)
{
    const auto& cfg = model.config_;
    nlohmann::ordered_json j;
    j["format"] = "seizeval-model";
    j["version"] = 1;
    nlohmann::ordered_json c;
    c["kind"] = to_string(cfg.kind);
    c["n_trees"] = cfg.n_trees;
    c["max_depth"] = cfg.max_depth ? nlohmann::ordered_json(*cfg.max_depth) : nlohmann::ordered_json(nullptr);
    c["max_bins"] = cfg.max_bins;
    c["rng_seed"] = cfg.rng_seed;
    c["threshold_feature"] = cfg.threshold_feature;
    c["threshold_value"] = cfg.threshold_value;
    j["config"] = std::move(c);
    j["columns"] = model.columns_;
    auto trees = nlohmann::ordered_json::array();
    for (const auto& t : model.trees_) {
        std::vector<std::int32_t> feature, left, right;
        std::vector<float> threshold;
        std::vector<int> label;
        for (const auto& n : t.nodes) {
            feature.push_back(n.feature);
            threshold.push_back(n.threshold);
            left.push_back(n.left);
            right.push_back(n.right);
            label.push_back(n.label);
        }
        trees.push_back(
            {{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right}, {"label", label}});
    }
    j["trees"] = std::move(trees);
    return j;
}

Model model_from_json(const nlohmann::json& j)
{
    try {
        if (j.at("format").get<std::string>() != "seizeval-model")
            fail(ErrorKind::format, kModule, "not a seizeval model");
        Model m;
        const auto& c = j.at("config");
        m.config_.kind = parse_predictor_kind(c.at("kind").get<std::string>());
        m.config_.n_trees = c.at("n_trees").get<int>();
        if (!c.at("max_depth").is_null()) m.config_.max_depth = c.at("max_depth").get<int>();
        m.config_.max_bins = c.at("max_bins").get<int>();
        m.config_.rng_seed = c.at("rng_seed").get<std::uint64_t>();
        m.config_.threshold_feature = c.at("threshold_feature").get<std::string>();
        m.config_.threshold_value = c.at("threshold_value").get<double>();
        m.columns_ = j.at("columns").get<std::vector<std::string>>();
        for (const auto& t : j.at("trees")) {
            const auto feature = t.at("feature").get<std::vector<std::int32_t>>();
            const auto threshold = t.at("threshold").get<std::vector<float>>();
            const auto left = t.at("left").get<std::vector<std::int32_t>>();
            const auto right = t.at("right").get<std::vector<std::int32_t>>();
            const auto label = t.at("label").get<std::vector<int>>();
            DecisionTree tree;
            for (std::size_t i = 0; i < feature.size(); ++i)
                tree.nodes.push_back(TreeNode{feature.at(i), threshold.at(i), left.at(i), right.at(i),
                                              static_cast<Label>(label.at(i))});
            m.trees_.push_back(std::move(tree));
        }
        if (m.config_.kind == PredictorKind::threshold_baseline)
            m.threshold_columns_ = resolve_threshold_columns(m.columns_, m.config_.threshold_feature);
        return m;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::parse, kModule, std::string("malformed model JSON: ") + e.what());
    }
}

}  // namespace seizeval
