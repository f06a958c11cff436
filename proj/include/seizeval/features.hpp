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

#include "seizeval/partition.hpp"
#include "seizeval/recording.hpp"
#include "seizeval/timeline.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace seizeval {

struct WindowingConfig {
    double window_s = 4.0;
    double step_s = 0.5;

    void validate() const;
};

struct BandDefinition {
    std::string name;
    double lo_hz = 0.0;
    double hi_hz = 0.0;
};

/// delta, theta, alpha, beta, gamma and the two low-frequency bands.
std::vector<BandDefinition> default_bands();

/// Per-channel feature names, in column order (19 entries).
const std::vector<std::string>& feature_names();
inline constexpr std::size_t kFeaturesPerChannel = 19;

/// Windows x (channels * 19) feature values, row-major.
struct FeatureMatrix {
    std::vector<std::string> columns;
    std::vector<float> values;
    std::vector<double> window_times;  ///< window start, seconds from file start
    std::vector<Label> labels;         ///< per-window majority label

    std::size_t rows() const noexcept { return labels.size(); }
    std::size_t cols() const noexcept { return columns.size(); }
    std::span<const float> row(std::size_t i) const noexcept { return {values.data() + i * cols(), cols()}; }
    float at(std::size_t r, std::size_t c) const noexcept { return values[r * cols() + c]; }

    /// Appends rows of `other`; columns must match (or this matrix be empty).
    void append(const FeatureMatrix& other);
};

/// Mean of absolute sample values.
double mean_amplitude(std::span<const double> window);

/// Sum of absolute first differences divided by the window length in samples.
double line_length(std::span<const double> window);

struct BandPowers {
    std::vector<double> absolute;
    std::vector<double> relative;
    bool zero_power = false;  ///< total power was 0; relative values are all 0
};

/// Periodogram (rectangular window) band powers. Absolute power integrates the
/// one-sided PSD over [lo, hi); relative power divides by the sum over all
/// given bands.
BandPowers band_powers(std::span<const double> window, double fs, std::span<const BandDefinition> bands);

/// The 19 per-channel features for one window.
std::vector<double> channel_features(std::span<const double> window, double fs);

/// Number of full windows that fit in n_samples.
std::size_t window_count(std::size_t n_samples, double fs, const WindowingConfig& cfg);

/// Sample offset of window j.
std::size_t window_start(std::size_t j, double fs, const WindowingConfig& cfg);

/// Features of one file, reading samples from its subject's (filtered) signals.
FeatureMatrix extract_features(const DataFile& file, const SubjectSignals& signals, const WindowingConfig& cfg,
                               int jobs = 1);

/// Features of raw multichannel data with per-sample labels.
FeatureMatrix extract_features(std::span<const std::vector<double>> channels,
                               std::span<const std::string> channel_labels, std::span<const Label> sample_labels,
                               double fs, const WindowingConfig& cfg, int jobs = 1);

/// Maps per-window labels back onto samples: the first window covers its full
/// span, each later window covers the step it newly adds, and the tail after
/// the last window repeats the last label.
std::vector<Label> project_window_labels(std::span<const Label> window_labels, std::size_t n_samples, double fs,
                                         const WindowingConfig& cfg);

/// Columnar CSV: t_start,label,<ch>_<feat>,...
void write_features_csv(std::ostream& out, const FeatureMatrix& m);

}  // namespace seizeval
