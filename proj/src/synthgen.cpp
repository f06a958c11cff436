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

#include "seizeval/synthgen.hpp"

#include "seizeval/edf.hpp"
#include "seizeval/error.hpp"
#include "seizeval/filter.hpp"
#include "seizeval/parallel.hpp"
#include "seizeval/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace seizeval {

namespace {

constexpr const char* kModule = "synthgen";
constexpr double kArtifactClearance_s = 60.0;
constexpr int kMaxPlacementAttempts = 100000;

// Unit-variance uniform draw. The band-pass that follows makes it near
// Gaussian, at a fraction of the cost of a normal draw.
double white(Rng& rng) { return std::numbers::sqrt3 * (2.0 * rng.uniform() - 1.0); }

std::string subject_name(std::size_t i)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "synth%02zu", i + 1);
    return buf;
}

double truncated_normal(Rng& rng, const MeanSd& d, double upper)
{
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const double v = rng.normal(d.mean, d.sd);
        if (v >= d.min && v <= upper) return v;
    }
    return std::clamp(d.mean, d.min, upper);
}

// Position of subject i in [-1, 1] for spreading per-subject traits.
double spread_position(std::size_t i, std::size_t n)
{
    if (n < 2) return 0.0;
    return 2.0 * static_cast<double>(i) / static_cast<double>(n - 1) - 1.0;
}

bool clear_of(const std::vector<Event>& placed, double start, double end, double gap)
{
    return std::all_of(placed.begin(), placed.end(),
                       [&](const Event& e) { return end + gap <= e.start() || start >= e.end() + gap; });
}

std::vector<Event> place_seizures(Rng& rng, const SynthConfig& cfg, double total_s, double file_s,
                                  const std::string& subject)
{
    const auto n = static_cast<std::size_t>(
        std::llround(truncated_normal(rng, cfg.seizures_per_subject, std::numeric_limits<double>::infinity())));
    std::vector<double> lengths(n);
    double needed = 0.0;
    for (auto& len : lengths) {
        // Whole samples, so events land on the sample grid.
        len = std::round(truncated_normal(rng, cfg.seizure_len_s, file_s) * cfg.fs) / cfg.fs;
        needed += len + cfg.min_seizure_gap_s;
    }
    if (needed > total_s)
        fail(ErrorKind::capacity, kModule,
             subject + ": " + std::to_string(n) + " seizures need " + std::to_string(needed) +
                 " s including gaps but the recording lasts " + std::to_string(total_s) + " s");

    std::vector<Event> placed;
    for (double len : lengths) {
        bool ok = false;
        for (int attempt = 0; attempt < kMaxPlacementAttempts && !ok; ++attempt) {
            const double start = std::floor(rng.uniform(0.0, total_s - len) * cfg.fs) / cfg.fs;
            const double end = start + len;
            if (std::floor(start / file_s) != std::floor((end - 1e-9) / file_s)) continue;
            if (!clear_of(placed, start, end, cfg.min_seizure_gap_s)) continue;
            placed.emplace_back(start, end);
            ok = true;
        }
        if (!ok)
            fail(ErrorKind::capacity, kModule, subject + ": could not place all seizures; recording too short");
    }
    std::sort(placed.begin(), placed.end(), [](const Event& a, const Event& b) { return a.start() < b.start(); });
    return placed;
}

std::vector<Event> place_artifacts(Rng& rng, const SynthConfig& cfg, double total_s, const std::vector<Event>& seizures)
{
    const auto n = static_cast<std::size_t>(std::llround(cfg.artifact_rate_per_h * total_s / 3600.0));
    std::vector<Event> placed;
    for (std::size_t k = 0; k < n; ++k) {
        for (int attempt = 0; attempt < 1000; ++attempt) {
            const double len = std::round(rng.uniform(3.0, 15.0) * cfg.fs) / cfg.fs;
            const double start = std::floor(rng.uniform(0.0, total_s - len) * cfg.fs) / cfg.fs;
            if (!clear_of(seizures, start, start + len, kArtifactClearance_s) || !clear_of(placed, start, start + len, 1.0))
                continue;
            placed.emplace_back(start, start + len, kBackground);
            break;
        }
    }
    std::sort(placed.begin(), placed.end(), [](const Event& a, const Event& b) { return a.start() < b.start(); });
    return placed;
}

// RMS of the causal filter's response to unit-variance white noise.
double noise_gain(std::span<const Biquad> sos, double fs)
{
    std::vector<double> h(static_cast<std::size_t>(60.0 * fs), 0.0);
    h[0] = 1.0;
    sos_filter(sos, h);
    double e = 0.0;
    for (double v : h) e += v * v;
    return std::sqrt(e);
}

struct SubjectData {
    SynthSubject info;
    std::vector<Recording> recordings;
};

SubjectData generate_subject(const SynthConfig& cfg, std::size_t index)
{
    SubjectData out;
    auto& info = out.info;
    info.subject_id = subject_name(index);
    const double pos = spread_position(index, cfg.n_subjects);
    info.background_uv = cfg.background_uv * std::pow(cfg.amplitude_ratio, pos);
    info.seizure_freq_hz = cfg.seizure_freq_hz * (1.0 + cfg.freq_spread * pos);

    Rng rng = Rng::derive(cfg.rng_seed, index);
    const double total_s = std::round(cfg.hours_per_subject * 3600.0);
    const double file_s = std::round(cfg.file_hours * 3600.0);
    const auto n_total = static_cast<std::size_t>(std::llround(total_s * cfg.fs));

    info.seizures = place_seizures(rng, cfg, total_s, file_s, info.subject_id);
    info.artifacts = place_artifacts(rng, cfg, total_s, info.seizures);

    const auto sos = butterworth_bandpass(2, cfg.background_lo_hz, cfg.background_hi_hz, cfg.fs);
    const double scale = info.background_uv / noise_gain(sos, cfg.fs);
    const double rhythm_amp = (cfg.seizure_gain - 1.0) * info.background_uv * std::numbers::sqrt2;
    const auto grid = default_signal_header("", 1);

    const auto sample_of = [&](double t) { return static_cast<std::size_t>(std::llround(t * cfg.fs)); };

    std::vector<std::string> labels;
    const auto& common = chbmit_common_channels();
    for (std::size_t c = 0; c < cfg.n_channels; ++c)
        labels.push_back(c < common.size() ? common[c] : "CH" + std::to_string(c + 1));

    // Event parameters are drawn up front so the per-channel loop below only
    // consumes noise.
    const auto focal_weights = [&](std::size_t focus) {
        std::vector<double> w(cfg.n_channels, 1.0);
        if (cfg.focal_width_channels > 0.0)
            for (std::size_t c = 0; c < cfg.n_channels; ++c)
                w[c] = std::exp(-std::abs(static_cast<double>(c) - static_cast<double>(focus)) / cfg.focal_width_channels);
        return w;
    };
    struct Burst {
        std::size_t a, b;
        double amplitude;  // peak of the sinusoid, or 0 for broadband noise
        double freq_hz;
        std::vector<double> weights;
        std::vector<double> phases;
    };
    const auto draw_phases = [&] {
        std::vector<double> p(cfg.n_channels);
        for (auto& v : p) v = rng.uniform(0.0, 2.0 * std::numbers::pi);
        return p;
    };
    std::vector<Burst> seizure_bursts;
    for (const auto& e : info.seizures) {
        const double strength = rng.uniform(1.0 - cfg.seizure_strength_spread, 1.0 + cfg.seizure_strength_spread);
        const auto focus = rng.below(cfg.n_channels);
        seizure_bursts.push_back({sample_of(e.start()), sample_of(e.end()), rhythm_amp * strength,
                                  info.seizure_freq_hz, focal_weights(focus), draw_phases()});
    }
    std::vector<Burst> artifact_bursts;
    for (const auto& e : info.artifacts) {
        const bool rhythmic = rng.uniform() < cfg.artifact_rhythmic_fraction;
        const double freq = info.seizure_freq_hz * rng.uniform(1.0 - cfg.artifact_freq_spread, 1.0 + cfg.artifact_freq_spread);
        const auto focus = rng.below(cfg.n_channels);
        artifact_bursts.push_back({sample_of(e.start()), sample_of(e.end()),
                                   rhythmic ? cfg.artifact_gain * info.background_uv * std::numbers::sqrt2 : 0.0,
                                   freq, rhythmic ? focal_weights(focus) : std::vector<double>(cfg.n_channels, 1.0),
                                   draw_phases()});
    }

    // Background state: per-second log-amplitude drift, interpolated.
    std::vector<double> state(static_cast<std::size_t>(total_s) + 2, 0.0);
    if (cfg.state_sd > 0.0) {
        const double decay = std::exp(-1.0 / cfg.state_tau_s);
        const double innov = cfg.state_sd * std::sqrt(1.0 - decay * decay);
        state[0] = cfg.state_sd * rng.normal();
        for (std::size_t k = 1; k < state.size(); ++k) state[k] = decay * state[k - 1] + innov * rng.normal();
    }
    std::vector<double> envelope(n_total);
    for (std::size_t i = 0; i < n_total; ++i) {
        const double t = static_cast<double>(i) / cfg.fs;
        const auto k = static_cast<std::size_t>(t);
        const double f = t - static_cast<double>(k);
        envelope[i] = scale * std::exp(state[k] * (1.0 - f) + state[k + 1] * f);
    }

    const auto add_rhythm = [&](std::vector<double>& x, const Burst& burst, std::size_t c) {
        const double ramp = std::min(5.0 * cfg.fs, static_cast<double>(burst.b - burst.a) / 4.0);
        const double w = 2.0 * std::numbers::pi * burst.freq_hz / cfg.fs;
        const double amp = burst.amplitude * burst.weights[c];
        for (std::size_t i = burst.a; i < burst.b; ++i) {
            const double k = static_cast<double>(i - burst.a);
            const double env = std::min({1.0, (k + 0.5) / ramp, (static_cast<double>(burst.b - i) - 0.5) / ramp});
            x[i] += amp * env * std::sin(w * k + burst.phases[c]);
        }
    };

    std::vector<std::vector<float>> channels(cfg.n_channels);
    std::vector<double> x(n_total);
    // Filters start from a settled state by discarding a warm-up second.
    const std::size_t warm = static_cast<std::size_t>(cfg.fs);
    for (std::size_t c = 0; c < cfg.n_channels; ++c) {
        std::vector<double> raw(n_total + warm);
        for (auto& v : raw) v = white(rng);
        sos_filter(sos, raw);
        for (std::size_t i = 0; i < n_total; ++i) x[i] = raw[i + warm] * envelope[i];

        for (const auto& burst : seizure_bursts) add_rhythm(x, burst, c);
        for (const auto& burst : artifact_bursts) {
            if (burst.amplitude > 0.0) {
                add_rhythm(x, burst, c);
                continue;
            }
            std::vector<double> noise(burst.b - burst.a + warm);
            for (auto& v : noise) v = white(rng);
            sos_filter(sos, noise);
            const double gain = cfg.artifact_gain * scale;
            for (std::size_t i = burst.a; i < burst.b; ++i) x[i] += gain * noise[i - burst.a + warm];
        }

        auto& ch = channels[c];
        ch.resize(n_total);
        for (std::size_t i = 0; i < n_total; ++i)
            ch[i] = static_cast<float>(digital_to_physical(grid, physical_to_digital(grid, x[i])));
    }

    // Split the timeline into files.
    const auto file_n = static_cast<std::size_t>(std::llround(file_s * cfg.fs));
    for (std::size_t begin = 0, seq = 0; begin < n_total; begin += file_n, ++seq) {
        const std::size_t end = std::min(n_total, begin + file_n);
        Recording r;
        char id[64];
        std::snprintf(id, sizeof id, "%s_%03zu", info.subject_id.c_str(), seq);
        r.meta.subject_id = info.subject_id;
        r.meta.file_id = id;
        r.meta.fs = cfg.fs;
        r.meta.n_channels = cfg.n_channels;
        r.meta.seq_index = seq;
        r.meta.duration_s = static_cast<double>(end - begin) / cfg.fs;
        r.channel_labels = labels;
        for (auto& ch : channels)
            r.channels.emplace_back(ch.begin() + static_cast<std::ptrdiff_t>(begin),
                                    ch.begin() + static_cast<std::ptrdiff_t>(end));
        const double t0 = static_cast<double>(begin) / cfg.fs;
        for (const auto& e : info.seizures)
            if (e.start() >= t0 && e.end() <= t0 + r.meta.duration_s + 1e-9)
                r.seizures.emplace_back(e.start() - t0, e.end() - t0);
        out.recordings.push_back(std::move(r));
    }
    return out;
}

}  // namespace

void SynthConfig::validate() const
{
    if (n_subjects == 0 || n_channels == 0) fail(ErrorKind::validation, kModule, "subject and channel counts must be positive");
    if (!(hours_per_subject > 0.0) || !(file_hours > 0.0)) fail(ErrorKind::validation, kModule, "durations must be positive");
    if (!(fs > 0.0)) fail(ErrorKind::validation, kModule, "fs must be positive");
    if (seizures_per_subject.min < 1.0 || seizures_per_subject.sd < 0.0)
        fail(ErrorKind::validation, kModule, "seizure count minimum must be >= 1");
    if (seizure_len_s.min < 2.0 / fs || seizure_len_s.sd < 0.0)
        fail(ErrorKind::validation, kModule, "minimum seizure length must be at least two samples");
    if (!(seizure_freq_hz > 0.0) || seizure_freq_hz * (1.0 + freq_spread) >= fs / 2.0 || freq_spread < 0.0 ||
        freq_spread >= 1.0)
        fail(ErrorKind::validation, kModule, "seizure frequencies must lie in (0, fs/2)");
    if (seizure_gain < 1.0) fail(ErrorKind::validation, kModule, "seizure_gain must be >= 1");
    if (!(amplitude_ratio > 0.0) || !(background_uv > 0.0) || artifact_rate_per_h < 0.0 || artifact_gain < 0.0 ||
        min_seizure_gap_s < 0.0)
        fail(ErrorKind::validation, kModule, "amplitude, artifact and gap parameters must be non-negative");
    if (state_sd < 0.0 || !(state_tau_s > 0.0) || seizure_strength_spread < 0.0 || seizure_strength_spread >= 1.0 ||
        focal_width_channels < 0.0 || artifact_rhythmic_fraction < 0.0 || artifact_rhythmic_fraction > 1.0)
        fail(ErrorKind::validation, kModule, "state, strength, focal and artifact-mix parameters out of range");
    if (artifact_freq_spread < 0.0 || artifact_freq_spread >= 1.0 ||
        seizure_freq_hz * (1.0 + freq_spread) * (1.0 + artifact_freq_spread) >= fs / 2.0)
        fail(ErrorKind::validation, kModule, "artifact rhythms must stay in (0, fs/2)");
}

SynthResult generate(const SynthConfig& cfg, int jobs)
{
    cfg.validate();
    std::vector<SubjectData> parts(cfg.n_subjects);
    parallel_for(cfg.n_subjects, jobs, [&](std::size_t i) { parts[i] = generate_subject(cfg, i); });

    SynthResult out;
    std::vector<Recording> all;
    for (auto& p : parts) {
        for (auto& r : p.recordings) {
            for (const auto& e : r.seizures) out.annotations.push_back({r.meta.subject_id, r.meta.file_id, e});
            all.push_back(std::move(r));
        }
        out.subjects.push_back(std::move(p.info));
    }
    out.recordings = RecordingSet(std::move(all));
    return out;
}

nlohmann::ordered_json to_json(const SynthConfig& cfg)
{
    const auto msd = [](const MeanSd& d) { return nlohmann::ordered_json{{"mean", d.mean}, {"sd", d.sd}, {"min", d.min}}; };
    return {
        {"n_subjects", cfg.n_subjects},
        {"hours_per_subject", cfg.hours_per_subject},
        {"fs", cfg.fs},
        {"n_channels", cfg.n_channels},
        {"seizures_per_subject", msd(cfg.seizures_per_subject)},
        {"seizure_len_s", msd(cfg.seizure_len_s)},
        {"seizure_freq_hz", cfg.seizure_freq_hz},
        {"seizure_gain", cfg.seizure_gain},
        {"rng_seed", cfg.rng_seed},
        {"file_hours", cfg.file_hours},
        {"min_seizure_gap_s", cfg.min_seizure_gap_s},
        {"background_uv", cfg.background_uv},
        {"background_lo_hz", cfg.background_lo_hz},
        {"background_hi_hz", cfg.background_hi_hz},
        {"freq_spread", cfg.freq_spread},
        {"amplitude_ratio", cfg.amplitude_ratio},
        {"state_sd", cfg.state_sd},
        {"state_tau_s", cfg.state_tau_s},
        {"seizure_strength_spread", cfg.seizure_strength_spread},
        {"focal_width_channels", cfg.focal_width_channels},
        {"artifact_rate_per_h", cfg.artifact_rate_per_h},
        {"artifact_gain", cfg.artifact_gain},
        {"artifact_rhythmic_fraction", cfg.artifact_rhythmic_fraction},
        {"artifact_freq_spread", cfg.artifact_freq_spread},
    };
}

SynthConfig synth_config_from_json(const nlohmann::json& j)
{
    SynthConfig c;
    const auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    const auto get_msd = [&](const char* key, MeanSd& d) {
        if (!j.contains(key)) return;
        const auto& o = j.at(key);
        d.mean = o.at("mean").get<double>();
        d.sd = o.at("sd").get<double>();
        d.min = o.at("min").get<double>();
    };
    try {
        get("n_subjects", c.n_subjects);
        get("hours_per_subject", c.hours_per_subject);
        get("fs", c.fs);
        get("n_channels", c.n_channels);
        get_msd("seizures_per_subject", c.seizures_per_subject);
        get_msd("seizure_len_s", c.seizure_len_s);
        get("seizure_freq_hz", c.seizure_freq_hz);
        get("seizure_gain", c.seizure_gain);
        get("rng_seed", c.rng_seed);
        get("file_hours", c.file_hours);
        get("min_seizure_gap_s", c.min_seizure_gap_s);
        get("background_uv", c.background_uv);
        get("background_lo_hz", c.background_lo_hz);
        get("background_hi_hz", c.background_hi_hz);
        get("freq_spread", c.freq_spread);
        get("amplitude_ratio", c.amplitude_ratio);
        get("state_sd", c.state_sd);
        get("state_tau_s", c.state_tau_s);
        get("seizure_strength_spread", c.seizure_strength_spread);
        get("focal_width_channels", c.focal_width_channels);
        get("artifact_rate_per_h", c.artifact_rate_per_h);
        get("artifact_gain", c.artifact_gain);
        get("artifact_rhythmic_fraction", c.artifact_rhythmic_fraction);
        get("artifact_freq_spread", c.artifact_freq_spread);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::parse, kModule, std::string("bad synthetic config: ") + e.what());
    }
    c.validate();
    return c;
}

}  // namespace seizeval
