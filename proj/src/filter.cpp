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

#include "seizeval/filter.hpp"

#include "seizeval/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace seizeval {

namespace {

constexpr const char* kModule = "signal-features";

using cplx = std::complex<double>;

// Steady-state state vector of one transposed direct-form II section for a unit step.
std::array<double, 2> step_state(const Biquad& s)
{
    const double a1 = s.a[0];
    const double a2 = s.a[1];
    const double r0 = s.b[1] - a1 * s.b[0];
    const double r1 = s.b[2] - a2 * s.b[0];
    const double det = 1.0 + a1 + a2;
    return {(r0 + r1) / det, ((1.0 + a1) * r1 - a2 * r0) / det};
}

std::vector<std::array<double, 2>> cascade_step_state(std::span<const Biquad> sos)
{
    std::vector<std::array<double, 2>> zi(sos.size());
    double scale = 1.0;
    for (std::size_t i = 0; i < sos.size(); ++i) {
        const auto z = step_state(sos[i]);
        zi[i] = {scale * z[0], scale * z[1]};
        scale *= (sos[i].b[0] + sos[i].b[1] + sos[i].b[2]) / (1.0 + sos[i].a[0] + sos[i].a[1]);
    }
    return zi;
}

void run_cascade(std::span<const Biquad> sos, std::vector<std::array<double, 2>> state, std::span<double> x)
{
    for (std::size_t k = 0; k < sos.size(); ++k) {
        const auto& s = sos[k];
        double z0 = state[k][0];
        double z1 = state[k][1];
        for (double& v : x) {
            const double in = v;
            const double y = s.b[0] * in + z0;
            z0 = s.b[1] * in - s.a[0] * y + z1;
            z1 = s.b[2] * in - s.a[1] * y;
            v = y;
        }
    }
}

}  // namespace

std::vector<Biquad> butterworth_bandpass(int order, double lo_hz, double hi_hz, double fs)
{
    if (order < 1) fail(ErrorKind::domain, kModule, "filter order must be >= 1");
    if (!(fs > 0.0) || !(lo_hz > 0.0) || !(lo_hz < hi_hz) || !(hi_hz < fs / 2.0))
        fail(ErrorKind::domain, kModule,
             "band edges must satisfy 0 < lo < hi < fs/2 (lo=" + std::to_string(lo_hz) +
                 ", hi=" + std::to_string(hi_hz) + ", fs=" + std::to_string(fs) + ")");

    const double fs2 = 2.0 * fs;
    const double w1 = fs2 * std::tan(std::numbers::pi * lo_hz / fs);
    const double w2 = fs2 * std::tan(std::numbers::pi * hi_hz / fs);
    const double bw = w2 - w1;
    const double w0 = std::sqrt(w1 * w2);

    // Analog band-pass poles from the low-pass prototype poles.
    std::vector<cplx> poles;
    for (int k = 0; k < order; ++k) {
        const double theta = std::numbers::pi * (2.0 * k + order + 1) / (2.0 * order);
        const cplx p = std::polar(1.0, theta) * (bw / 2.0);
        const cplx root = std::sqrt(p * p - w0 * w0);
        poles.push_back(p + root);
        poles.push_back(p - root);
    }

    // Bilinear transform. order zeros at s=0 map to z=1, the rest go to z=-1.
    double gain = std::pow(bw, order);
    cplx num = std::pow(cplx(fs2, 0.0), order);
    cplx den = 1.0;
    std::vector<cplx> zpoles;
    for (const auto& p : poles) {
        den *= fs2 - p;
        zpoles.push_back((fs2 + p) / (fs2 - p));
    }
    gain *= (num / den).real();

    // Pair conjugates; real poles pair with each other.
    std::vector<cplx> upper;
    std::vector<double> reals;
    for (const auto& z : zpoles) {
        if (std::abs(z.imag()) < 1e-12 * std::max(1.0, std::abs(z)))
            reals.push_back(z.real());
        else if (z.imag() > 0.0)
            upper.push_back(z);
    }
    std::sort(upper.begin(), upper.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
    std::sort(reals.begin(), reals.end());

    std::vector<Biquad> sos;
    for (const auto& z : upper) sos.push_back(Biquad{{1.0, 0.0, -1.0}, {-2.0 * z.real(), std::norm(z)}});
    for (std::size_t i = 0; i + 1 < reals.size(); i += 2)
        sos.push_back(Biquad{{1.0, 0.0, -1.0}, {-(reals[i] + reals[i + 1]), reals[i] * reals[i + 1]}});
    if (sos.size() != static_cast<std::size_t>(order))
        fail(ErrorKind::domain, kModule, "pole pairing failed for the requested band");

    for (auto& c : sos[0].b) c *= gain;
    return sos;
}

void sos_filter(std::span<const Biquad> sos, std::span<double> signal)
{
    run_cascade(sos, std::vector<std::array<double, 2>>(sos.size(), {0.0, 0.0}), signal);
}

void sos_filtfilt(std::span<const Biquad> sos, std::span<double> signal)
{
    const std::size_t n = signal.size();
    if (n == 0) return;
    const std::size_t pad = std::min<std::size_t>(3 * (2 * sos.size() + 1), n - 1);

    std::vector<double> ext(n + 2 * pad);
    for (std::size_t i = 0; i < pad; ++i) ext[i] = 2.0 * signal[0] - signal[pad - i];
    std::copy(signal.begin(), signal.end(), ext.begin() + static_cast<std::ptrdiff_t>(pad));
    for (std::size_t i = 0; i < pad; ++i) ext[pad + n + i] = 2.0 * signal[n - 1] - signal[n - 2 - i];

    const auto zi = cascade_step_state(sos);
    auto scaled = [&](double x0) {
        auto s = zi;
        for (auto& z : s) z = {z[0] * x0, z[1] * x0};
        return s;
    };

    run_cascade(sos, scaled(ext.front()), ext);
    std::reverse(ext.begin(), ext.end());
    run_cascade(sos, scaled(ext.front()), ext);
    std::reverse(ext.begin(), ext.end());
    std::copy(ext.begin() + static_cast<std::ptrdiff_t>(pad), ext.begin() + static_cast<std::ptrdiff_t>(pad + n),
              signal.begin());
}

double sos_magnitude(std::span<const Biquad> sos, double f_hz, double fs)
{
    const cplx z1 = std::polar(1.0, -2.0 * std::numbers::pi * f_hz / fs);
    const cplx z2 = z1 * z1;
    cplx h = 1.0;
    for (const auto& s : sos) h *= (s.b[0] + s.b[1] * z1 + s.b[2] * z2) / (1.0 + s.a[0] * z1 + s.a[1] * z2);
    return std::abs(h);
}

std::vector<double> bandpass_filter(std::span<const double> signal, double fs, double lo_hz, double hi_hz, int order)
{
    const auto sos = butterworth_bandpass(order, lo_hz, hi_hz, fs);
    std::vector<double> out(signal.begin(), signal.end());
    sos_filtfilt(sos, out);
    return out;
}

void bandpass_filter_inplace(std::span<float> signal, double fs, double lo_hz, double hi_hz, int order)
{
    const auto sos = butterworth_bandpass(order, lo_hz, hi_hz, fs);
    std::vector<double> work(signal.begin(), signal.end());
    sos_filtfilt(sos, work);
    std::transform(work.begin(), work.end(), signal.begin(), [](double v) { return static_cast<float>(v); });
}

}  // namespace seizeval
