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

#ifndef MFRIS_NOMA_HPP
#define MFRIS_NOMA_HPP

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mfris/units.hpp"

namespace mfris::noma {

using Eigen::VectorXd;

/// QoS demands exceed the direction's power budget. Carries the minimum
/// total power coefficient so callers can report how far off the demand is.
struct FeasibilityError : std::runtime_error {
    double min_power_sum;
    explicit FeasibilityError(double s)
        : std::runtime_error("noma: QoS infeasible, minimum power sum " + std::to_string(s) +
                             " > 1"),
          min_power_sum(s) {}
};

/// One direction's allocation problem: equivalent gains sorted ascending
/// (the SIC order) and the per-user SINR floors r = 2^Rmin - 1.
struct DirectionAllocationInput {
    VectorXd gamma;  // ascending, > 0
    VectorXd r_min;  // >= 0

    int users() const { return static_cast<int>(gamma.size()); }

    void validate() const {
        if (gamma.size() != r_min.size() || gamma.size() == 0)
            throw std::invalid_argument("allocation input: size mismatch");
        for (int j = 0; j < users(); ++j) {
            if (!(gamma(j) > 0.0)) throw std::invalid_argument("allocation input: gains must be > 0");
            if (r_min(j) < 0.0) throw std::invalid_argument("allocation input: r_min must be >= 0");
            if (j > 0 && gamma(j) < gamma(j - 1) - 1e-15)
                throw std::invalid_argument("allocation input: gains must be ascending");
        }
    }
};

inline double qos_sinr_floor(double rate_min) { return std::exp2(rate_min) - 1.0; }

/// Minimum power coefficients meeting every QoS floor with equality,
/// by backward recursion p_j = r_j (sum_{i>j} p_i + 1/gamma_j).
inline VectorXd min_power_coeffs(const DirectionAllocationInput& in) {
    in.validate();
    const int J = in.users();
    VectorXd pbar = VectorXd::Zero(J);
    double tail = 0.0;
    for (int j = J - 1; j >= 0; --j) {
        pbar(j) = in.r_min(j) * (tail + 1.0 / in.gamma(j));
        tail += pbar(j);
    }
    return pbar;
}

inline bool is_feasible(const DirectionAllocationInput& in) {
    return min_power_coeffs(in).sum() <= 1.0 + 1e-12;
}

/// Optimal coefficients: QoS-minimal base plus all excess power routed to
/// the strongest user, compensating the earlier users for the extra SIC
/// interference so their rates stay pinned at the floor.
inline VectorXd optimal_power_allocation(const DirectionAllocationInput& in) {
    VectorXd pbar = min_power_coeffs(in);
    const int J = in.users();
    double excess = 1.0 - pbar.sum();
    if (excess < -1e-12) throw FeasibilityError(pbar.sum());
    if (excess < 0.0) excess = 0.0;

    double prod = 1.0;
    for (int i = 0; i < J - 1; ++i) prod *= 1.0 + in.r_min(i);

    VectorXd dp = VectorXd::Zero(J);
    dp(J - 1) = excess / prod;
    double tail = dp(J - 1);
    for (int j = J - 2; j >= 0; --j) {
        dp(j) = in.r_min(j) * tail;
        tail += dp(j);
    }
    return pbar + dp;
}

/// Direction sum rate sum_j log2(1 + gamma_j p_j / (gamma_j P_j + 1)),
/// with P_j the power of users decoded after j.
inline double direction_sum_rate(const DirectionAllocationInput& in, const VectorXd& p) {
    if (p.size() != in.gamma.size())
        throw std::invalid_argument("direction_sum_rate: size mismatch");
    const int J = in.users();
    double total = 0.0;
    double tail = 0.0;
    for (int j = J - 1; j >= 0; --j) {
        total += log2p1(in.gamma(j) * p(j) / (in.gamma(j) * tail + 1.0));
        tail += p(j);
    }
    return total;
}

/// Closed-form optimal objective: sum of the QoS floors plus the excess-rate
/// term of the strongest user.
inline double optimal_sum_rate(const DirectionAllocationInput& in) {
    VectorXd pbar = min_power_coeffs(in);
    const int J = in.users();
    double excess = 1.0 - pbar.sum();
    if (excess < -1e-12) throw FeasibilityError(pbar.sum());
    if (excess < 0.0) excess = 0.0;
    double total = 0.0;
    for (int j = 0; j < J; ++j) total += log2p1(in.r_min(j));
    double prod = 1.0;
    for (int i = 0; i < J; ++i) prod *= 1.0 + in.r_min(i);
    total += log2p1(excess * in.gamma(J - 1) / prod);
    return total;
}

/// Rate of user j split into the QoS part and the increment part of the
/// rate-splitting chain; base + delta equals the plain rate expression for
/// any p summing to one.
struct SplitRate {
    double base = 0.0;
    double delta = 0.0;
};

inline SplitRate rate_split_terms(const DirectionAllocationInput& in, const VectorXd& p, int j) {
    const int J = in.users();
    VectorXd pbar = min_power_coeffs(in);
    VectorXd dp = p - pbar;
    double dp_after = 0.0, pbar_after = 0.0, p_after = 0.0;
    for (int i = j + 1; i < J; ++i) {
        dp_after += dp(i);
        pbar_after += pbar(i);
        p_after += p(i);
    }
    double inv_g = 1.0 / in.gamma(j);
    SplitRate sr;
    sr.base = log2p1((pbar(j) + in.r_min(j) * dp_after) / (pbar_after + dp_after + inv_g));
    sr.delta = log2p1((dp(j) - in.r_min(j) * dp_after) /
                      (pbar(j) + in.r_min(j) * dp_after + p_after + inv_g));
    return sr;
}

struct GridSearchResult {
    VectorXd p;
    double rate = 0.0;
};

/// Brute-force simplex enumeration for up to three users; rejects
/// QoS-violating points. Verification oracle, not a product path.
inline GridSearchResult oracle_grid_search(const DirectionAllocationInput& in, double step) {
    in.validate();
    const int J = in.users();
    if (J > 3) throw std::invalid_argument("oracle_grid_search: at most 3 users");
    if (!(step > 0.0) || step > 1e-2 + 1e-15)
        throw std::invalid_argument("oracle_grid_search: step must be in (0, 1e-2]");

    const long n = std::lround(1.0 / step);
    const double tol = 1e-9;

    // QoS check and rate via products of (1 + SINR); logs deferred to the end.
    auto evaluate = [&](const double* p) -> double {
        double tail = 0.0;
        double prod = 1.0;
        for (int j = J - 1; j >= 0; --j) {
            double sinr = in.gamma(j) * p[j] / (in.gamma(j) * tail + 1.0);
            if (sinr < in.r_min(j) - tol) return -1.0;
            prod *= 1.0 + sinr;
            tail += p[j];
        }
        return prod;
    };

    double best = -1.0;
    double bp[3] = {0, 0, 0};
    if (J == 1) {
        double p0 = 1.0;
        double v = evaluate(&p0);
        if (v > 0) {
            best = v;
            bp[0] = 1.0;
        }
    } else if (J == 2) {
        for (long i = 0; i <= n; ++i) {
            double p[2] = {static_cast<double>(i) / n, static_cast<double>(n - i) / n};
            double v = evaluate(p);
            if (v > best) {
                best = v;
                bp[0] = p[0];
                bp[1] = p[1];
            }
        }
    } else {
        for (long i = 0; i <= n; ++i) {
            for (long l = 0; l <= n - i; ++l) {
                double p[3] = {static_cast<double>(i) / n, static_cast<double>(l) / n,
                               static_cast<double>(n - i - l) / n};
                double v = evaluate(p);
                if (v > best) {
                    best = v;
                    bp[0] = p[0];
                    bp[1] = p[1];
                    bp[2] = p[2];
                }
            }
        }
    }
    if (best < 0.0) throw FeasibilityError(min_power_coeffs(in).sum());
    GridSearchResult res;
    res.p = Eigen::Map<VectorXd>(bp, J);
    res.rate = std::log2(best);
    return res;
}

} // namespace mfris::noma

#endif
