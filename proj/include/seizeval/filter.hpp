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

#include <array>
#include <span>
#include <vector>

namespace seizeval {

/// One second-order section: b0 b1 b2 / 1 a1 a2 (a0 normalized to 1).
struct Biquad {
    std::array<double, 3> b{};
    std::array<double, 2> a{};  ///< a1, a2
};

/// Digital Butterworth band-pass of the given analog prototype order
/// (2*order poles), via band transform and bilinear transform with
/// pre-warped edges. Edges must satisfy 0 < lo < hi < fs/2.
std::vector<Biquad> butterworth_bandpass(int order, double lo_hz, double hi_hz, double fs);

/// Single forward pass through the cascade, starting from rest.
void sos_filter(std::span<const Biquad> sos, std::span<double> signal);

/// Zero-phase forward-backward filtering with odd-reflection padding and
/// steady-state initial conditions. Output overwrites `signal`.
void sos_filtfilt(std::span<const Biquad> sos, std::span<double> signal);

/// Magnitude response of the cascade at f_hz (single pass).
double sos_magnitude(std::span<const Biquad> sos, double f_hz, double fs);

/// Zero-phase order-`order` Butterworth band-pass of one channel. Output
/// length equals input length.
std::vector<double> bandpass_filter(std::span<const double> signal, double fs, double lo_hz, double hi_hz,
                                    int order = 4);

/// In-place float variant used for long recordings.
void bandpass_filter_inplace(std::span<float> signal, double fs, double lo_hz, double hi_hz, int order = 4);

}  // namespace seizeval
