// SPDX-License-Identifier: Apache-2.0
//
// mfris — multi-functional reconfigurable intelligent surface network
// simulation and optimization library
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MFRIS_RNG_HPP
#define MFRIS_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace mfris {

/// Seedable, portable random source. The mt19937_64 stream is pinned by the
/// C++ standard and the Gaussian transform below is plain arithmetic, so a
/// given seed produces the same draws on every platform (the distributions
/// in <random> are implementation-defined and are deliberately not used).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform double in (lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; pairs are cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform(); // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Circularly-symmetric complex normal with unit variance,
    /// i.e. E|x|^2 = 1: two independent real normals scaled by 1/sqrt(2).
    std::complex<double> complex_normal() {
        double re = normal();
        double im = normal();
        return {re * M_SQRT1_2, im * M_SQRT1_2};
    }

    std::uint64_t raw() { return gen_(); }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace mfris

#endif
