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

#ifndef MFRIS_SURFACE_HPP
#define MFRIS_SURFACE_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "mfris/channel.hpp"
#include "mfris/geometry.hpp"
#include "mfris/units.hpp"

namespace mfris {

using Eigen::ArrayXd;
using Eigen::ArrayXi;
using Eigen::RowVectorXcd;
using Eigen::VectorXd;

inline double wrap_phase(double theta) {
    double t = std::fmod(theta, 2.0 * M_PI);
    return t < 0.0 ? t + 2.0 * M_PI : t;
}

/// Per-element operating state of the surface. alpha(m) = 1 puts element m
/// in signal-relay mode (S), alpha(m) = 0 in energy-harvesting mode (H).
struct SurfaceState {
    ArrayXi alpha;                 // binary modes, length M
    std::array<ArrayXd, 2> beta;   // amplitude coefficients per direction
    std::array<ArrayXd, 2> theta;  // phase shifts per direction, [0, 2pi)
    Vec3 location{0, 0, 0};
    double beta_max = 1.0;         // amplification cap, >= 1 for MF operation

    int elements() const { return static_cast<int>(alpha.size()); }
    int s_mode_count() const { return alpha.sum(); }

    static SurfaceState all_harvest(int M, const Vec3& loc, double beta_max) {
        SurfaceState s;
        s.alpha = ArrayXi::Zero(M);
        for (auto k : kDirections) {
            s.beta[dir_index(k)] = ArrayXd::Zero(M);
            s.theta[dir_index(k)] = ArrayXd::Zero(M);
        }
        s.location = loc;
        s.beta_max = beta_max;
        return s;
    }

    void validate() const {
        const int M = elements();
        for (auto k : kDirections) {
            int ki = dir_index(k);
            if (beta[ki].size() != M || theta[ki].size() != M)
                throw std::invalid_argument("surface: inconsistent vector lengths");
            for (int m = 0; m < M; ++m) {
                if (alpha(m) != 0 && alpha(m) != 1)
                    throw std::invalid_argument("surface: alpha must be binary");
                if (beta[ki](m) < -1e-12 || beta[ki](m) > beta_max + 1e-9)
                    throw std::invalid_argument("surface: beta outside [0, beta_max]");
            }
        }
        for (int m = 0; m < M; ++m)
            if (beta[0](m) + beta[1](m) > beta_max + 1e-9)
                throw std::invalid_argument("surface: beta_r + beta_t exceeds beta_max");
    }
};

/// Diagonal of the reflective/refractive coefficient matrix Theta_k:
/// alpha_m sqrt(beta_m^k) exp(j theta_m^k).
inline VectorXcd coefficient_diagonal(const SurfaceState& s, Direction k) {
    int ki = dir_index(k);
    VectorXcd d(s.elements());
    for (int m = 0; m < s.elements(); ++m)
        d(m) = s.alpha(m) ? std::polar(std::sqrt(s.beta[ki](m)), s.theta[ki](m))
                          : std::complex<double>(0.0, 0.0);
    return d;
}

/// Combined BS -> user channel row h_kj^H + g_kj^H Theta_k H.
inline RowVectorXcd combined_channel(const ChannelSet& cs, const VectorXcd& theta_diag,
                                     Direction k, int j) {
    int ki = dir_index(k);
    return cs.h[ki][j].adjoint() +
           cs.g[ki][j].adjoint() * theta_diag.asDiagonal() * cs.H;
}

/// Non-linear energy harvesting and circuit dissipation constants, plus the
/// surface and user noise powers (all watts / linear).
struct PowerModelParams {
    double Z = 24e-3;     // maximum harvested power per element
    double a = 150.0;     // logistic steepness
    double q = 0.014;     // logistic threshold (watts)
    double P_b = 1.5e-3;  // per phase shifter
    double P_dc = 0.3e-3; // amplifier DC biasing
    double P_c = 2.1e-6;  // RF-DC conversion circuit
    double xi = 1.1;      // inverse amplifier efficiency
    double sigma_s2 = 1e-10; // surface (amplification) noise power
    double sigma_u2 = 1e-10; // user AWGN power

    void validate() const {
        if (Z < 0 || a <= 0 || q <= 0 || xi < 1.0)
            throw std::invalid_argument("power model: invalid constants");
    }

    double omega() const { return 1.0 / (1.0 + std::exp(a * q)); }
};

/// Transmit side: beamformers and NOMA power allocation coefficients, both
/// indexed in geometry order (the SIC order is carried separately).
struct TxState {
    std::array<VectorXcd, 2> f;       // beamformers, length N
    std::array<VectorXd, 2> p;        // power allocation, sums to 1 per direction
    std::array<VectorXd, 2> qos_min;  // per-user rate floors, bits/s/Hz
    double p_bs_max = 1.0;

    double transmit_power() const {
        return f[0].squaredNorm() + f[1].squaredNorm();
    }
};

/// SIC decoding order per direction: perm[k][pos] is the geometry index of
/// the user decoded at position pos (ascending equivalent gain).
struct SicOrder {
    std::array<std::vector<int>, 2> perm;

    std::vector<int> positions(Direction k) const {
        const auto& pm = perm[dir_index(k)];
        std::vector<int> pos(pm.size());
        for (size_t i = 0; i < pm.size(); ++i) pos[pm[i]] = static_cast<int>(i);
        return pos;
    }
};

/// Equivalent combined channel gain of Eq-(9) form: the SIC order sorts
/// users ascending by this value (ties broken by user index).
inline double decoding_order_gain(const ChannelSet& cs, const SurfaceState& s, const TxState& tx,
                                  const PowerModelParams& pm, Direction k, int j) {
    VectorXcd th = coefficient_diagonal(s, k);
    RowVectorXcd hbar = combined_channel(cs, th, k, j);
    int ki = dir_index(k);
    double sig = std::norm((hbar * tx.f[ki])(0));
    double inter = std::norm((hbar * tx.f[1 - ki])(0));
    double ris_noise =
        pm.sigma_s2 * (cs.g[ki][j].adjoint() * th.asDiagonal()).squaredNorm();
    return sig / (inter + ris_noise + pm.sigma_u2);
}

inline SicOrder derive_sic_order(const ChannelSet& cs, const SurfaceState& s, const TxState& tx,
                                 const PowerModelParams& pm) {
    SicOrder order;
    for (auto k : kDirections) {
        int ki = dir_index(k);
        int J = cs.geometry.users(k);
        std::vector<double> gain(J);
        for (int j = 0; j < J; ++j) gain[j] = decoding_order_gain(cs, s, tx, pm, k, j);
        std::vector<int> idx(J);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](int a, int b) { return gain[a] < gain[b]; });
        order.perm[ki] = idx;
    }
    return order;
}

struct SinrRate {
    double sinr = 0.0;
    double rate = 0.0;
};

/// SINR and rate at user (k, l) decoding the signal of user (k, j); both
/// indices are geometry indices and j must not come after l in the order.
/// The amplification noise term sigma_s^2 ||g^H Theta||^2 is always present
/// (it vanishes only where Theta_k is zero).
inline SinrRate sinr_and_rate(const ChannelSet& cs, const SurfaceState& s, const TxState& tx,
                              const PowerModelParams& pm, const SicOrder& order, Direction k,
                              int decoder_l, int signal_j) {
    int ki = dir_index(k);
    auto pos = order.positions(k);
    if (pos[signal_j] > pos[decoder_l])
        throw std::invalid_argument("sinr_and_rate: signal decoded after decoder in SIC order");

    double P_after = 0.0; // power of users decoded after signal_j
    for (int i = 0; i < cs.geometry.users(k); ++i)
        if (pos[i] > pos[signal_j]) P_after += tx.p[ki](i);

    VectorXcd th = coefficient_diagonal(s, k);
    RowVectorXcd hbar = combined_channel(cs, th, k, decoder_l);
    double own = std::norm((hbar * tx.f[ki])(0));
    double inter = std::norm((hbar * tx.f[1 - ki])(0));
    double ris_noise =
        pm.sigma_s2 * (cs.g[ki][decoder_l].adjoint() * th.asDiagonal()).squaredNorm();

    SinrRate out;
    out.sinr = own * tx.p[ki](signal_j) / (own * P_after + inter + ris_noise + pm.sigma_u2);
    out.rate = log2p1(out.sinr);
    return out;
}

/// Sum over users of each user's own decoding rate R_{j->j}.
inline double sum_rate(const ChannelSet& cs, const SurfaceState& s, const TxState& tx,
                       const PowerModelParams& pm, const SicOrder& order) {
    double total = 0.0;
    for (auto k : kDirections)
        for (int j = 0; j < cs.geometry.users(k); ++j)
            total += sinr_and_rate(cs, s, tx, pm, order, k, j, j).rate;
    return total;
}

/// Expected RF power collected by element m:
/// (1 - alpha_m) (sum_k |(H f_k)_m|^2 + sigma_s^2).
inline double rf_power_per_element(const ChannelSet& cs, const SurfaceState& s, const TxState& tx,
                                   const PowerModelParams& pm, int m) {
    double inc = 0.0;
    for (auto k : kDirections) inc += std::norm((cs.H.row(m) * tx.f[dir_index(k)])(0));
    return (1 - s.alpha(m)) * (inc + pm.sigma_s2);
}

/// Non-linear harvesting response; exactly zero at zero input and saturating
/// at Z for large input.
inline double harvested_power(double p_rf, const PowerModelParams& pm) {
    if (p_rf < 0.0) throw std::domain_error("harvested_power: negative RF power");
    double omega = pm.omega();
    double upsilon = pm.Z / (1.0 + std::exp(-pm.a * (p_rf - pm.q)));
    return (upsilon - pm.Z * omega) / (1.0 - omega);
}

/// Output (radiated) power of the surface:
/// sum_k ( sum_k' ||Theta_k H f_k'||^2 + sigma_s^2 ||Theta_k||_F^2 ).
inline double output_power(const SurfaceState& s, const TxState& tx, const ChannelSet& cs,
                           const PowerModelParams& pm) {
    double total = 0.0;
    for (auto k : kDirections) {
        VectorXcd th = coefficient_diagonal(s, k);
        for (auto kp : kDirections)
            total += (th.asDiagonal() * (cs.H * tx.f[dir_index(kp)])).squaredNorm();
        total += pm.sigma_s2 * th.squaredNorm();
    }
    return total;
}

struct EnergyBalance {
    double consumed = 0.0;
    double harvested = 0.0;
    double slack = 0.0; // harvested - consumed; self-sustainable iff >= 0
};

/// Static energy budget of the surface: circuit dissipation plus amplifier
/// draw against the total harvested power. The phase-shifter/amplifier count
/// is 2 sum(alpha) regardless of whether one of the two amplitude
/// coefficients is zero.
inline EnergyBalance energy_balance(const SurfaceState& s, const TxState& tx,
                                    const ChannelSet& cs, const PowerModelParams& pm) {
    EnergyBalance eb;
    const int M = s.elements();
    const int Ms = s.s_mode_count();
    eb.consumed = 2.0 * (pm.P_b + pm.P_dc) * Ms + (M - Ms) * pm.P_c +
                  pm.xi * output_power(s, tx, cs, pm);
    eb.harvested = 0.0;
    for (int m = 0; m < M; ++m)
        eb.harvested += harvested_power(rf_power_per_element(cs, s, tx, pm, m), pm);
    eb.slack = eb.harvested - eb.consumed;
    return eb;
}

} // namespace mfris

#endif
