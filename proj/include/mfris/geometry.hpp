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

#ifndef MFRIS_GEOMETRY_HPP
#define MFRIS_GEOMETRY_HPP

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace mfris {

using Vec3 = Eigen::Vector3d;

/// Spatial direction served by the surface: reflection half-space (r) or
/// refraction half-space (t).
enum class Direction : int { reflect = 0, refract = 1 };

constexpr std::array<Direction, 2> kDirections{Direction::reflect, Direction::refract};

inline int dir_index(Direction k) { return static_cast<int>(k); }

inline Direction other(Direction k) {
    return k == Direction::reflect ? Direction::refract : Direction::reflect;
}

/// Axis-aligned deployable region for the surface.
struct RegionBox {
    Vec3 lo{0, 0, 0};
    Vec3 hi{0, 0, 0};

    bool contains(const Vec3& p, double tol = 1e-9) const {
        return (p.array() >= lo.array() - tol).all() && (p.array() <= hi.array() + tol).all();
    }
    Vec3 center() const { return 0.5 * (lo + hi); }
    Vec3 clamp(const Vec3& p) const { return p.cwiseMax(lo).cwiseMin(hi); }
};

/// Node placement and array layout. The surface is a uniform rectangular
/// array of elements_y x elements_z unit cells parallel to the Y-Z plane;
/// the base station is a uniform linear array with antennas_bs elements.
/// Users are on the ground plane (zero height).
struct NetworkGeometry {
    Vec3 bs_position{0, 0, 0};
    // user_positions[k][j]: user j served in direction k
    std::array<std::vector<Vec3>, 2> user_positions;
    RegionBox region;
    int antennas_bs = 1;   // N
    int elements_y = 1;    // M_y
    int elements_z = 1;    // M_z
    double spacing_ratio = 0.5; // d / lambda

    int elements() const { return elements_y * elements_z; }
    int users(Direction k) const { return static_cast<int>(user_positions[dir_index(k)].size()); }
    int users_total() const { return users(Direction::reflect) + users(Direction::refract); }
    const Vec3& user(Direction k, int j) const { return user_positions[dir_index(k)][j]; }

    void validate() const {
        if (antennas_bs < 1 || elements_y < 1 || elements_z < 1)
            throw std::invalid_argument("geometry: array sizes must be positive");
        if ((region.lo.array() > region.hi.array()).any())
            throw std::invalid_argument("geometry: region bounds must satisfy lo <= hi");
        if (spacing_ratio <= 0.0)
            throw std::invalid_argument("geometry: spacing ratio must be positive");
        for (auto k : kDirections)
            for (const auto& u : user_positions[dir_index(k)])
                if (std::abs(u.z()) > 1e-12)
                    throw std::invalid_argument("geometry: users must have zero height");
    }
};

/// Large-scale fading description. h0 is the linear power gain at the 1 m
/// reference distance; kappa_* are the path loss exponents and rician_* the
/// linear Rician factors of the BS-surface, BS-user and surface-user links.
struct FadingParams {
    double h0 = 0.01;
    double kappa_bs = 2.2;  // BS  -> surface
    double kappa_bu = 2.8;  // BS  -> user
    double kappa_su = 2.6;  // surface -> user
    double rician_bs = 2.0; // linear, may be +inf for pure LoS
    double rician_bu = 2.0;
    double rician_su = 2.0;

    void validate() const {
        if (h0 <= 0.0) throw std::invalid_argument("fading: h0 must be positive");
        if (kappa_bs < 2.0 || kappa_bu < 2.0 || kappa_su < 2.0)
            throw std::invalid_argument("fading: path loss exponents must be >= 2");
        if (rician_bs < 0.0 || rician_bu < 0.0 || rician_su < 0.0)
            throw std::invalid_argument("fading: Rician factors must be >= 0");
    }
};

/// Distance-power law h0 * d^(-kappa), linear power gain.
inline double path_loss(double distance, double exponent, double h0) {
    if (!(distance > 0.0)) throw std::domain_error("path_loss: distance must be positive");
    return h0 * std::pow(distance, -exponent);
}

/// Vertical (elevation) and horizontal (azimuth) angles of the ray
/// source -> target, both in (-pi, pi].
struct RayAngles {
    double vertical = 0.0;
    double horizontal = 0.0;
};

inline RayAngles angles_from_positions(const Vec3& source, const Vec3& target) {
    Vec3 d = target - source;
    double ground = std::hypot(d.x(), d.y());
    if (d.norm() < 1e-12)
        throw std::domain_error("angles_from_positions: coincident points");
    RayAngles a;
    a.vertical = std::atan2(d.z(), ground);
    a.horizontal = (ground < 1e-15) ? 0.0 : std::atan2(d.y(), d.x());
    return a;
}

} // namespace mfris

#endif
