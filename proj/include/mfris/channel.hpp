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

#ifndef MFRIS_CHANNEL_HPP
#define MFRIS_CHANNEL_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

#include "mfris/geometry.hpp"
#include "mfris/rng.hpp"

namespace mfris {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

/// Angle set of one LoS link: vertical/horizontal angle-of-arrival at the
/// receiving array and vertical/horizontal angle-of-departure at the
/// transmitting array.
struct LosAngles {
    double phi_arrival = 0.0;      // vertical AoA
    double theta_arrival = 0.0;    // horizontal AoA
    double phi_departure = 0.0;    // vertical AoD
    double theta_departure = 0.0;  // horizontal AoD
};

/// Uniform linear array response, entries exp(-j 2 pi (d/lambda) i arg).
inline VectorXcd steering_vector(int n, double spacing_ratio, double arg) {
    VectorXcd v(n);
    const double step = -2.0 * M_PI * spacing_ratio * arg;
    for (int i = 0; i < n; ++i) v(i) = std::polar(1.0, step * i);
    return v;
}

/// URA response of the surface for a ray with vertical angle phi and
/// horizontal angle theta: Kronecker product of the z-axis factor
/// (sin(phi) sin(theta)) and the y-axis factor (sin(phi) cos(theta)).
/// Element m = iz * M_y + iy.
inline VectorXcd surface_response(const NetworkGeometry& geom, double phi, double theta) {
    VectorXcd az = steering_vector(geom.elements_z, geom.spacing_ratio,
                                   std::sin(phi) * std::sin(theta));
    VectorXcd ay = steering_vector(geom.elements_y, geom.spacing_ratio,
                                   std::sin(phi) * std::cos(theta));
    VectorXcd a(geom.elements());
    for (int iz = 0; iz < geom.elements_z; ++iz)
        for (int iy = 0; iy < geom.elements_y; ++iy)
            a(iz * geom.elements_y + iy) = az(iz) * ay(iy);
    return a;
}

/// BS array response (ULA) for a ray with the given angles.
inline VectorXcd bs_response(const NetworkGeometry& geom, double phi, double theta) {
    return steering_vector(geom.antennas_bs, geom.spacing_ratio, std::sin(phi) * std::cos(theta));
}

/// LoS component of the BS-surface matrix: Kronecker product of the three
/// steering factors, shape (M_y * M_z) x N. Every entry has unit modulus.
inline MatrixXcd los_component(const NetworkGeometry& geom, const LosAngles& ang) {
    if (!std::isfinite(ang.phi_arrival) || !std::isfinite(ang.theta_arrival) ||
        !std::isfinite(ang.phi_departure) || !std::isfinite(ang.theta_departure))
        throw std::invalid_argument("los_component: angles must be finite");
    VectorXcd ris = surface_response(geom, ang.phi_arrival, ang.theta_arrival);
    VectorXcd bs = bs_response(geom, ang.phi_departure, ang.theta_departure);
    return ris * bs.transpose();
}

/// Rician mixing weights (sqrt(beta/(beta+1)), sqrt(1/(beta+1))).
/// An infinite Rician factor selects the pure LoS limit.
inline std::pair<double, double> rician_weights(double beta) {
    if (std::isinf(beta)) return {1.0, 0.0};
    return {std::sqrt(beta / (beta + 1.0)), std::sqrt(1.0 / (beta + 1.0))};
}

/// One channel realization. The NLoS draws are frozen at sampling time;
/// rebuilding at a new surface location refreshes only the LoS factors and
/// the location-dependent path losses (the BS-user links are unaffected).
struct ChannelSet {
    NetworkGeometry geometry;
    FadingParams fading;
    Vec3 surface_location{0, 0, 0};

    // assembled channels (path loss included)
    MatrixXcd H;                               // M x N
    std::array<std::vector<VectorXcd>, 2> h;   // BS  -> user, length N
    std::array<std::vector<VectorXcd>, 2> g;   // surface -> user, length M

    // small-scale factors at the current surface location (LoS/NLoS mix)
    MatrixXcd H_hat;
    std::array<std::vector<VectorXcd>, 2> h_hat;
    std::array<std::vector<VectorXcd>, 2> g_hat;

    // frozen NLoS draws
    MatrixXcd H_nlos;
    std::array<std::vector<VectorXcd>, 2> h_nlos;
    std::array<std::vector<VectorXcd>, 2> g_nlos;

    // amplitude path-loss factors sqrt(h0 d^-kappa) and distances
    double L_bs = 0.0, d_bs = 0.0;
    std::array<std::vector<double>, 2> L_bu, d_bu;
    std::array<std::vector<double>, 2> L_su, d_su;

    /// Refresh LoS factors and path losses for the given surface location,
    /// reusing the frozen NLoS draws.
    void rebuild_at(const Vec3& location) {
        surface_location = location;
        const auto [wl0, wn0] = rician_weights(fading.rician_bs);
        const auto [wl1, wn1] = rician_weights(fading.rician_bu);
        const auto [wl2, wn2] = rician_weights(fading.rician_su);

        d_bs = (geometry.bs_position - location).norm();
        L_bs = std::sqrt(path_loss(d_bs, fading.kappa_bs, fading.h0));
        LosAngles bs_ris;
        {
            RayAngles aoa = angles_from_positions(location, geometry.bs_position);
            RayAngles aod = angles_from_positions(geometry.bs_position, location);
            bs_ris = {aoa.vertical, aoa.horizontal, aod.vertical, aod.horizontal};
        }
        H_hat = wl0 * los_component(geometry, bs_ris) + wn0 * H_nlos;
        H = L_bs * H_hat;

        for (auto k : kDirections) {
            int ki = dir_index(k);
            int J = geometry.users(k);
            h[ki].resize(J);
            g[ki].resize(J);
            h_hat[ki].resize(J);
            g_hat[ki].resize(J);
            L_bu[ki].resize(J);
            d_bu[ki].resize(J);
            L_su[ki].resize(J);
            d_su[ki].resize(J);
            for (int j = 0; j < J; ++j) {
                const Vec3& u = geometry.user(k, j);

                d_bu[ki][j] = (geometry.bs_position - u).norm();
                L_bu[ki][j] = std::sqrt(path_loss(d_bu[ki][j], fading.kappa_bu, fading.h0));
                RayAngles bd = angles_from_positions(geometry.bs_position, u);
                VectorXcd h_los = bs_response(geometry, bd.vertical, bd.horizontal);
                h_hat[ki][j] = wl1 * h_los + wn1 * h_nlos[ki][j];
                h[ki][j] = L_bu[ki][j] * h_hat[ki][j];

                d_su[ki][j] = (location - u).norm();
                L_su[ki][j] = std::sqrt(path_loss(d_su[ki][j], fading.kappa_su, fading.h0));
                RayAngles sd = angles_from_positions(location, u);
                VectorXcd g_los = surface_response(geometry, sd.vertical, sd.horizontal);
                g_hat[ki][j] = wl2 * g_los + wn2 * g_nlos[ki][j];
                g[ki][j] = L_su[ki][j] * g_hat[ki][j];
            }
        }
    }
};

/// Draw one Rician realization. Deterministic for a fixed seed; the NLoS
/// draws are stored so the set can later be rebuilt at a new location.
inline ChannelSet sample_channels(const NetworkGeometry& geometry, const FadingParams& fading,
                                  const Vec3& surface_location, std::uint64_t seed) {
    geometry.validate();
    fading.validate();
    if (!geometry.region.contains(surface_location))
        throw std::invalid_argument("sample_channels: surface location outside region");

    ChannelSet cs;
    cs.geometry = geometry;
    cs.fading = fading;

    Rng rng(seed);
    const int M = geometry.elements();
    const int N = geometry.antennas_bs;

    cs.H_nlos.resize(M, N);
    for (int m = 0; m < M; ++m)
        for (int n = 0; n < N; ++n) cs.H_nlos(m, n) = rng.complex_normal();

    for (auto k : kDirections) {
        int ki = dir_index(k);
        int J = geometry.users(k);
        cs.h_nlos[ki].resize(J);
        cs.g_nlos[ki].resize(J);
        for (int j = 0; j < J; ++j) {
            cs.h_nlos[ki][j].resize(N);
            for (int n = 0; n < N; ++n) cs.h_nlos[ki][j](n) = rng.complex_normal();
            cs.g_nlos[ki][j].resize(M);
            for (int m = 0; m < M; ++m) cs.g_nlos[ki][j](m) = rng.complex_normal();
        }
    }

    cs.rebuild_at(surface_location);
    return cs;
}

} // namespace mfris

#endif
