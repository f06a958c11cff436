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

#include "seizeval/features.hpp"

#include "seizeval/error.hpp"
#include "seizeval/parallel.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <ostream>
#include <unordered_map>

namespace seizeval {

namespace {

constexpr const char* kModule = "signal-features";

std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

// Real-to-complex FFT workspace for one transform size. Planning is not
// thread-safe in FFTW, execution is.
class RealFft {
public:
    explicit RealFft(std::size_t n) : n_(n)
    {
        in_ = static_cast<double*>(fftw_malloc(sizeof(double) * n));
        out_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
        std::lock_guard lock(fftw_planner_mutex());
        plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE);
    }
    ~RealFft()
    {
        {
            std::lock_guard lock(fftw_planner_mutex());
            fftw_destroy_plan(plan_);
        }
        fftw_free(in_);
        fftw_free(out_);
    }
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    /// |X_k|^2 for k = 0..n/2.
    void power(std::span<const double> x, std::vector<double>& out)
    {
        std::copy(x.begin(), x.end(), in_);
        fftw_execute(plan_);
        out.resize(n_ / 2 + 1);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = out_[k][0] * out_[k][0] + out_[k][1] * out_[k][1];
    }

private:
    std::size_t n_;
    double* in_ = nullptr;
    fftw_complex* out_ = nullptr;
    fftw_plan plan_ = nullptr;
};

RealFft& fft_for(std::size_t n)
{
    thread_local std::unordered_map<std::size_t, std::unique_ptr<RealFft>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<RealFft>(n);
    return *slot;
}

// One-sided periodogram PSD (units^2 / Hz).
void periodogram(std::span<const double> x, double fs, std::vector<double>& psd)
{
    const std::size_t n = x.size();
    fft_for(n).power(x, psd);
    const double scale = 1.0 / (fs * static_cast<double>(n));
    for (std::size_t k = 0; k < psd.size(); ++k) {
        const bool unpaired = k == 0 || (n % 2 == 0 && k == n / 2);
        psd[k] *= unpaired ? scale : 2.0 * scale;
    }
}

struct BandBins {
    std::size_t first = 0;
    std::size_t last = 0;  // exclusive
};

BandBins bins_of(const BandDefinition& band, std::size_t n, double fs, std::size_t n_bins)
{
    // Bins k with lo <= k*fs/n < hi.
    const double df = fs / static_cast<double>(n);
    auto first = static_cast<std::size_t>(std::max(0.0, std::ceil(band.lo_hz / df - 1e-9)));
    auto last = static_cast<std::size_t>(std::max(0.0, std::ceil(band.hi_hz / df - 1e-9)));
    return {std::min(first, n_bins), std::min(last, n_bins)};
}

void validate_bands(std::span<const BandDefinition> bands, double fs)
{
    for (const auto& b : bands)
        if (!(b.lo_hz >= 0.0) || !(b.lo_hz < b.hi_hz) || !(b.hi_hz <= fs / 2.0))
            fail(ErrorKind::domain, kModule, "band '" + b.name + "' must satisfy 0 <= lo < hi <= fs/2");
}

}  // namespace

void WindowingConfig::validate() const
{
    if (!(step_s > 0.0) || !(step_s <= window_s))
        fail(ErrorKind::validation, kModule, "windowing requires 0 < step_s <= window_s");
}

std::vector<BandDefinition> default_bands()
{
    return {{"delta", 0.5, 4.0}, {"theta", 4.0, 8.0},  {"alpha", 8.0, 12.0}, {"beta", 12.0, 30.0},
            {"gamma", 30.0, 45.0}, {"low", 0.0, 0.5}, {"vlow", 0.1, 0.5}};
}

const std::vector<std::string>& feature_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n{"mean_amplitude", "line_length"};
        for (const auto& b : default_bands()) n.push_back("abs_" + b.name);
        for (const auto& b : default_bands()) n.push_back("rel_" + b.name);
        n.insert(n.end(), {"total_power", "spectral_entropy", "peak_frequency"});
        return n;
    }();
    return names;
}

void FeatureMatrix::append(const FeatureMatrix& other)
{
    if (columns.empty() && rows() == 0)
        columns = other.columns;
    else if (columns != other.columns)
        fail(ErrorKind::schema, kModule, "cannot append feature matrices with different columns");
    values.insert(values.end(), other.values.begin(), other.values.end());
    window_times.insert(window_times.end(), other.window_times.begin(), other.window_times.end());
    labels.insert(labels.end(), other.labels.begin(), other.labels.end());
}

double mean_amplitude(std::span<const double> window)
{
    if (window.empty()) return 0.0;
    double sum = 0.0;
    for (double v : window) sum += std::abs(v);
    return sum / static_cast<double>(window.size());
}

double line_length(std::span<const double> window)
{
    if (window.size() < 2) fail(ErrorKind::domain, kModule, "line length needs at least 2 samples");
    double sum = 0.0;
    for (std::size_t i = 1; i < window.size(); ++i) sum += std::abs(window[i] - window[i - 1]);
    return sum / static_cast<double>(window.size());
}

BandPowers band_powers(std::span<const double> window, double fs, std::span<const BandDefinition> bands)
{
    if (window.empty()) fail(ErrorKind::domain, kModule, "band powers need a non-empty window");
    validate_bands(bands, fs);
    std::vector<double> psd;
    periodogram(window, fs, psd);
    const double df = fs / static_cast<double>(window.size());

    BandPowers out;
    out.absolute.assign(bands.size(), 0.0);
    out.relative.assign(bands.size(), 0.0);
    double total = 0.0;
    for (std::size_t b = 0; b < bands.size(); ++b) {
        const auto bins = bins_of(bands[b], window.size(), fs, psd.size());
        double p = 0.0;
        for (std::size_t k = bins.first; k < bins.last; ++k) p += psd[k];
        out.absolute[b] = p * df;
        total += out.absolute[b];
    }
    if (total > 0.0)
        for (std::size_t b = 0; b < bands.size(); ++b) out.relative[b] = out.absolute[b] / total;
    else
        out.zero_power = true;
    return out;
}

std::vector<double> channel_features(std::span<const double> window, double fs)
{
    static const auto bands = default_bands();
    std::vector<double> f;
    f.reserve(kFeaturesPerChannel);
    f.push_back(mean_amplitude(window));
    f.push_back(line_length(window));

    std::vector<double> psd;
    periodogram(window, fs, psd);
    const double df = fs / static_cast<double>(window.size());
    std::vector<double> absolute(bands.size(), 0.0);
    double total = 0.0;
    double max_hi = 0.0;
    for (std::size_t b = 0; b < bands.size(); ++b) {
        if (!(bands[b].hi_hz <= fs / 2.0)) fail(ErrorKind::domain, kModule, "band above Nyquist");
        const auto bins = bins_of(bands[b], window.size(), fs, psd.size());
        double p = 0.0;
        for (std::size_t k = bins.first; k < bins.last; ++k) p += psd[k];
        absolute[b] = p * df;
        total += absolute[b];
        max_hi = std::max(max_hi, bands[b].hi_hz);
    }
    f.insert(f.end(), absolute.begin(), absolute.end());
    double entropy = 0.0;
    for (double a : absolute) {
        const double rel = total > 0.0 ? a / total : 0.0;
        f.push_back(rel);
        if (rel > 0.0) entropy -= rel * std::log(rel);
    }
    f.push_back(total);
    f.push_back(total > 0.0 ? entropy / std::log(static_cast<double>(bands.size())) : 0.0);

    const auto top = bins_of({"", 0.0, max_hi}, window.size(), fs, psd.size());
    std::size_t peak = 0;
    for (std::size_t k = 1; k < top.last; ++k)
        if (psd[k] > psd[peak]) peak = k;
    f.push_back(total > 0.0 ? static_cast<double>(peak) * df : 0.0);
    return f;
}

std::size_t window_start(std::size_t j, double fs, const WindowingConfig& cfg)
{
    return static_cast<std::size_t>(std::llround(static_cast<double>(j) * cfg.step_s * fs));
}

std::size_t window_count(std::size_t n_samples, double fs, const WindowingConfig& cfg)
{
    cfg.validate();
    const auto ws = static_cast<std::size_t>(std::llround(cfg.window_s * fs));
    if (ws == 0 || n_samples < ws) return 0;
    const double step = cfg.step_s * fs;
    auto count = static_cast<std::size_t>(std::floor(static_cast<double>(n_samples - ws) / step + 1e-9)) + 1;
    while (count > 0 && window_start(count - 1, fs, cfg) + ws > n_samples) --count;
    while (window_start(count, fs, cfg) + ws <= n_samples) ++count;
    return count;
}

FeatureMatrix extract_features(std::span<const std::vector<double>> channels,
                               std::span<const std::string> channel_labels, std::span<const Label> sample_labels,
                               double fs, const WindowingConfig& cfg, int jobs)
{
    cfg.validate();
    if (channels.size() != channel_labels.size())
        fail(ErrorKind::validation, kModule, "channel and label counts differ");
    const std::size_t n = sample_labels.size();
    for (const auto& ch : channels)
        if (ch.size() != n) fail(ErrorKind::validation, kModule, "channel length differs from label length");
    const auto ws = static_cast<std::size_t>(std::llround(cfg.window_s * fs));
    if (n < ws || ws < 2)
        fail(ErrorKind::capacity, kModule,
             "file of " + format_double(static_cast<double>(n) / fs) + " s is shorter than the " +
                 format_double(cfg.window_s) + " s window");

    const std::size_t rows = window_count(n, fs, cfg);
    const std::size_t n_ch = channels.size();
    const std::size_t cols = n_ch * kFeaturesPerChannel;

    FeatureMatrix m;
    m.columns.reserve(cols);
    for (const auto& label : channel_labels)
        for (const auto& name : feature_names()) m.columns.push_back(label + "_" + name);
    m.values.assign(rows * cols, 0.0f);
    m.window_times.resize(rows);
    m.labels.resize(rows);

    std::vector<std::size_t> prefix(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + sample_labels[i];
    for (std::size_t j = 0; j < rows; ++j) {
        const std::size_t s = window_start(j, fs, cfg);
        m.window_times[j] = static_cast<double>(s) / fs;
        m.labels[j] = 2 * (prefix[s + ws] - prefix[s]) > ws ? kSeizure : kBackground;
    }

    parallel_for(n_ch, jobs, [&](std::size_t c) {
        const auto& x = channels[c];
        for (std::size_t j = 0; j < rows; ++j) {
            const std::size_t s = window_start(j, fs, cfg);
            const auto f = channel_features(std::span<const double>(x.data() + s, ws), fs);
            float* dst = m.values.data() + j * cols + c * kFeaturesPerChannel;
            for (std::size_t k = 0; k < kFeaturesPerChannel; ++k) dst[k] = static_cast<float>(f[k]);
        }
    });
    return m;
}

FeatureMatrix extract_features(const DataFile& file, const SubjectSignals& signals, const WindowingConfig& cfg,
                               int jobs)
{
    if (file.meta.subject_id != signals.subject_id)
        fail(ErrorKind::validation, kModule, "file '" + file.meta.file_id + "' does not belong to these signals");
    const std::size_t n = file.n_samples();
    for (const auto& span : file.payload)
        if (span.end > signals.n_samples())
            fail(ErrorKind::boundary, kModule, "file '" + file.meta.file_id + "' reaches past the subject timeline");

    std::vector<std::vector<double>> channels(signals.channels.size());
    for (std::size_t c = 0; c < channels.size(); ++c) {
        auto& dst = channels[c];
        dst.reserve(n);
        for (const auto& span : file.payload)
            dst.insert(dst.end(), signals.channels[c].begin() + static_cast<std::ptrdiff_t>(span.begin),
                       signals.channels[c].begin() + static_cast<std::ptrdiff_t>(span.end));
    }
    const auto labels = events_to_labels(file.events, signals.fs, static_cast<double>(n) / signals.fs);
    try {
        return extract_features(channels, signals.channel_labels, labels.labels(), signals.fs, cfg, jobs);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::capacity)
            fail(ErrorKind::capacity, kModule, "file '" + file.meta.file_id + "': " + e.what());
        throw;
    }
}

std::vector<Label> project_window_labels(std::span<const Label> window_labels, std::size_t n_samples, double fs,
                                         const WindowingConfig& cfg)
{
    std::vector<Label> out(n_samples, kBackground);
    if (window_labels.empty()) return out;
    const auto ws = static_cast<std::size_t>(std::llround(cfg.window_s * fs));
    std::size_t covered = 0;
    for (std::size_t j = 0; j < window_labels.size(); ++j) {
        const std::size_t end = std::min(n_samples, window_start(j, fs, cfg) + ws);
        for (std::size_t i = covered; i < end; ++i) out[i] = window_labels[j];
        covered = std::max(covered, end);
    }
    for (std::size_t i = covered; i < n_samples; ++i) out[i] = window_labels.back();
    return out;
}

void write_features_csv(std::ostream& out, const FeatureMatrix& m)
{
    out << "t_start,label";
    for (const auto& c : m.columns) out << ',' << c;
    out << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out << format_double(m.window_times[r]) << ',' << static_cast<int>(m.labels[r]);
        for (float v : m.row(r)) out << ',' << format_double(static_cast<double>(v));
        out << '\n';
    }
}

}  // namespace seizeval
