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
#include <vector>

#include "json.hpp"

namespace seizeval {

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
    double min = 0.0;
};

struct SynthConfig {
    std::size_t n_subjects = 3;
    double hours_per_subject = 8.0;
    double fs = 256.0;
    std::size_t n_channels = 18;
    MeanSd seizures_per_subject{7.6, 5.8, 2.0};
    MeanSd seizure_len_s{58.6, 65.0, 10.0};
    double seizure_freq_hz = 4.0;
    double seizure_gain = 4.0;
    std::uint64_t rng_seed = 1;

    double file_hours = 1.0;
    double min_seizure_gap_s = 120.0;
    double background_uv = 30.0;
    double background_lo_hz = 0.5;
    double background_hi_hz = 30.0;
    /// Subject rhythm frequencies spread over seizure_freq_hz * (1 +/- freq_spread).
    double freq_spread = 0.5;
    /// Subject background amplitudes spread geometrically by this ratio per step.
    double amplitude_ratio = 1.5;
    /// Slow log-amplitude drift of the background (Ornstein-Uhlenbeck).
    double state_sd = 0.25;
    double state_tau_s = 300.0;
    /// Per-seizure strength factor drawn from 1 +/- seizure_strength_spread.
    double seizure_strength_spread = 0.4;
    /// Seizure involvement decays as exp(-d / focal_width) with channel
    /// distance d from a random focus; 0 involves all channels equally.
    double focal_width_channels = 4.0;
    /// Non-seizure bursts per hour at artifact_gain times background RMS;
    /// a fraction of them is rhythmic near the subject's seizure rhythm
    /// (relative offset up to artifact_freq_spread), the rest broadband.
    double artifact_rate_per_h = 4.0;
    double artifact_gain = 4.0;
    double artifact_rhythmic_fraction = 0.5;
    double artifact_freq_spread = 0.25;

    void validate() const;
};

/// Per-subject parameters actually used, for reporting and tests.
struct SynthSubject {
    std::string subject_id;
    double background_uv = 0.0;
    double seizure_freq_hz = 0.0;
    std::vector<Event> seizures;   ///< timeline seconds
    std::vector<Event> artifacts;  ///< timeline seconds
};

struct SynthResult {
    RecordingSet recordings;
    std::vector<Annotation> annotations;
    std::vector<SynthSubject> subjects;
};

/// Synthetic recordings with planted seizures. Background is band-limited
/// noise; a seizure adds a ramped sinusoid at the subject's rhythm frequency
/// whose RMS on a fully involved channel is (seizure_gain - 1) times the
/// background RMS, scaled per seizure by its strength factor. Gain 1 therefore
/// leaves seizures indistinguishable from background. Samples lie on the EDF digital
/// grid, so writing and re-reading the files reproduces them exactly.
SynthResult generate(const SynthConfig& cfg, int jobs = 1);

nlohmann::ordered_json to_json(const SynthConfig& cfg);
SynthConfig synth_config_from_json(const nlohmann::json& j);

}  // namespace seizeval
