// Copyright 2026 The qecopt authors
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

#include <cmath>
#include <complex>
#include <cstdint>

namespace qecopt {

/// Deterministic 64-bit shift-register generator with Gaussian output.
///
/// The integer core is the xorshift64* recurrence
///
///     x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27;
///     output = x * 0x2545F4914F6CDD1D
///
/// applied to non-zero state (a zero seed is remapped to a fixed odd
/// constant). Uniform doubles take the top 53 bits of the output into
/// (0, 1]; Gaussians come from the Box-Muller transform
///
///     z0 = sqrt(-2 ln u1) * cos(2 pi u2)
///     z1 = sqrt(-2 ln u1) * sin(2 pi u2)
///
/// with z1 cached for the next call. Every draw is a pure function of the
/// seed and call order, so results are bit-reproducible across platforms
/// with IEEE-754 doubles.
class ShiftRegisterRng {
 public:
  explicit ShiftRegisterRng(std::uint64_t seed)
      : state_(seed ? seed : 0x9E3779B97F4A7C15ull) {}

  std::uint64_t next_u64() {
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545F4914F6CDD1Dull;
  }

  /// Uniform in (0, 1]; never returns 0 so log() is always safe.
  double next_uniform() {
    return (double(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  /// Real part first, then imaginary part.
  std::complex<double> next_complex_gaussian() {
    const double re = next_gaussian();
    const double im = next_gaussian();
    return {re, im};
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace qecopt
