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

#ifndef MFRIS_CONIC_CONES_HPP
#define MFRIS_CONIC_CONES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mfris::conic::detail {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline int svec_len(int d) { return d * (d + 1) / 2; }

/// Lower-triangular column-major packing with sqrt(2)-scaled off-diagonals,
/// so that svec(X)' svec(Y) = Tr(XY).
inline VectorXd svec(const MatrixXd& S) {
    const int d = static_cast<int>(S.rows());
    VectorXd v(svec_len(d));
    const double r2 = std::sqrt(2.0);
    int idx = 0;
    for (int j = 0; j < d; ++j)
        for (int i = j; i < d; ++i) v(idx++) = (i == j) ? S(i, j) : r2 * S(i, j);
    return v;
}

inline MatrixXd smat(const VectorXd& v, int d) {
    MatrixXd S(d, d);
    const double ir2 = 1.0 / std::sqrt(2.0);
    int idx = 0;
    for (int j = 0; j < d; ++j)
        for (int i = j; i < d; ++i) {
            double x = (i == j) ? v(idx) : ir2 * v(idx);
            S(i, j) = x;
            S(j, i) = x;
            ++idx;
        }
    return S;
}

/// Cone composition of the slack vector: zero (equality) rows first, then
/// nonnegative rows, second-order blocks and PSD blocks (svec packed).
struct ConeDims {
    int zero = 0;
    int nonneg = 0;
    std::vector<int> soc;
    std::vector<int> psd; // real symmetric matrix dimensions

    int cone_rows() const {
        int m = nonneg;
        for (int q : soc) m += q;
        for (int d : psd) m += svec_len(d);
        return m;
    }
    int rows() const { return zero + cone_rows(); }

    /// Barrier degree (nonneg count + one per SOC block + sum of PSD dims).
    double degree() const {
        double nu = nonneg + static_cast<double>(soc.size());
        for (int d : psd) nu += d;
        return nu;
    }
};

/// Identity element e of the cone part.
inline VectorXd cone_identity(const ConeDims& K) {
    VectorXd e = VectorXd::Zero(K.cone_rows());
    int off = 0;
    for (int i = 0; i < K.nonneg; ++i) e(off + i) = 1.0;
    off += K.nonneg;
    for (int q : K.soc) {
        e(off) = 1.0;
        off += q;
    }
    for (int d : K.psd) {
        e.segment(off, svec_len(d)) = svec(MatrixXd::Identity(d, d));
        off += svec_len(d);
    }
    return e;
}

/// Largest step t such that v + t*dv stays in the cone (capped at tmax).
inline double max_step(const ConeDims& K, const VectorXd& v, const VectorXd& dv, double tmax) {
    double t = tmax;
    int off = 0;
    for (int i = 0; i < K.nonneg; ++i) {
        if (dv(off + i) < 0.0) t = std::min(t, -v(off + i) / dv(off + i));
    }
    off += K.nonneg;
    for (int q : K.soc) {
        auto v0 = v(off);
        auto d0 = dv(off);
        auto v1 = v.segment(off + 1, q - 1);
        auto d1 = dv.segment(off + 1, q - 1);
        // f(a) = (v0 + a d0)^2 - ||v1 + a d1||^2 >= 0, v0 + a d0 >= 0
        double A = d0 * d0 - d1.squaredNorm();
        double B = 2.0 * (v0 * d0 - v1.dot(d1));
        double C = v0 * v0 - v1.squaredNorm();
        double bound = tmax;
        if (std::abs(A) < 1e-300) {
            if (B < 0.0) bound = -C / B;
        } else {
            double disc = B * B - 4.0 * A * C;
            if (disc >= 0.0) {
                double sq = std::sqrt(disc);
                double r1 = (-B - sq) / (2.0 * A);
                double r2 = (-B + sq) / (2.0 * A);
                if (r1 > r2) std::swap(r1, r2);
                if (r1 > 1e-18) bound = r1;
                else if (r2 > 1e-18 && (A < 0.0 || B < 0.0)) bound = r2;
            }
        }
        if (d0 < 0.0) bound = std::min(bound, -v0 / d0);
        t = std::min(t, bound);
        off += q;
    }
    for (int d : K.psd) {
        int len = svec_len(d);
        MatrixXd S = smat(v.segment(off, len), d);
        MatrixXd D = smat(dv.segment(off, len), d);
        Eigen::LLT<MatrixXd> llt(S);
        if (llt.info() == Eigen::Success) {
            MatrixXd L = llt.matrixL();
            MatrixXd T = L.triangularView<Eigen::Lower>().solve(D);
            MatrixXd W = L.triangularView<Eigen::Lower>().solve(T.transpose());
            Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (W + W.transpose()),
                                                        Eigen::EigenvaluesOnly);
            double lmin = eig.eigenvalues().minCoeff();
            if (lmin < 0.0) t = std::min(t, -1.0 / lmin);
        } else {
            // boundary point: fall back to eigen decomposition of the pencil
            Eigen::SelfAdjointEigenSolver<MatrixXd> eig(S + 1e-14 * MatrixXd::Identity(d, d));
            MatrixXd Shalf = eig.operatorInverseSqrt();
            MatrixXd W = Shalf * D * Shalf;
            Eigen::SelfAdjointEigenSolver<MatrixXd> e2(0.5 * (W + W.transpose()),
                                                       Eigen::EigenvaluesOnly);
            double lmin = e2.eigenvalues().minCoeff();
            if (lmin < 0.0) t = std::min(t, -1.0 / lmin);
        }
        off += len;
    }
    return t;
}

/// How far v sits outside the cone: max over blocks of the interior deficit.
/// Used to shift initial points into the interior.
inline double interior_deficit(const ConeDims& K, const VectorXd& v) {
    double worst = 0.0;
    int off = 0;
    for (int i = 0; i < K.nonneg; ++i) worst = std::max(worst, -v(off + i));
    off += K.nonneg;
    for (int q : K.soc) {
        double margin = v(off) - v.segment(off + 1, q - 1).norm();
        worst = std::max(worst, -margin);
        off += q;
    }
    for (int d : K.psd) {
        int len = svec_len(d);
        Eigen::SelfAdjointEigenSolver<MatrixXd> eig(smat(v.segment(off, len), d),
                                                    Eigen::EigenvaluesOnly);
        worst = std::max(worst, -eig.eigenvalues().minCoeff());
        off += len;
    }
    return worst;
}

/// Nesterov-Todd scaling of an interior pair (s, z) on the cone part.
/// Satisfies W z = W^{-T} s = lambda.
struct Scaling {
    ConeDims dims;
    VectorXd w_nonneg;   // sqrt(s/z)
    struct Soc {
        double eta = 1.0; // W = sqrt(eta) * Wbar
        VectorXd wbar;
    };
    std::vector<Soc> soc;
    struct Psd {
        MatrixXd R, Rinv;
        MatrixXd V;  // (R R')^{-1}
        MatrixXd Wp; // R R'
    };
    std::vector<Psd> psd;
    VectorXd lambda; // scaled point

    static Scaling compute(const ConeDims& K, const VectorXd& s, const VectorXd& z) {
        Scaling sc;
        sc.dims = K;
        sc.lambda.resize(K.cone_rows());
        int off = 0;
        sc.w_nonneg.resize(K.nonneg);
        for (int i = 0; i < K.nonneg; ++i) {
            if (s(off + i) <= 0.0 || z(off + i) <= 0.0)
                throw std::runtime_error("NT scaling: point not interior (nonneg)");
            sc.w_nonneg(i) = std::sqrt(s(off + i) / z(off + i));
            sc.lambda(off + i) = std::sqrt(s(off + i) * z(off + i));
        }
        off += K.nonneg;
        for (int q : K.soc) {
            auto sb = s.segment(off, q);
            auto zb = z.segment(off, q);
            double snorm2 = sb(0) * sb(0) - sb.tail(q - 1).squaredNorm();
            double znorm2 = zb(0) * zb(0) - zb.tail(q - 1).squaredNorm();
            if (snorm2 <= 0.0 || znorm2 <= 0.0 || sb(0) <= 0.0 || zb(0) <= 0.0)
                throw std::runtime_error("NT scaling: point not interior (soc)");
            double snorm = std::sqrt(snorm2), znorm = std::sqrt(znorm2);
            VectorXd sbar = sb / snorm, zbar = zb / znorm;
            double gamma = std::sqrt((1.0 + sbar.dot(zbar)) / 2.0);
            Soc blk;
            blk.eta = snorm / znorm; // W^2 = eta * Wbar^2
            blk.wbar.resize(q);
            blk.wbar(0) = (sbar(0) + zbar(0)) / (2.0 * gamma);
            blk.wbar.tail(q - 1) =
                (sbar.tail(q - 1) - zbar.tail(q - 1)) / (2.0 * gamma);
            // scaled point lambda = W z (closed form, cf. conelp)
            VectorXd lam(q);
            double scale = std::sqrt(snorm * znorm);
            lam(0) = gamma;
            // lambda_1 = ((gamma + zbar0) sbar1 + (gamma + sbar0) zbar1) / (sbar0 + zbar0 + 2 gamma)
            lam.tail(q - 1) = ((gamma + zbar(0)) * sbar.tail(q - 1) +
                               (gamma + sbar(0)) * zbar.tail(q - 1)) /
                              (sbar(0) + zbar(0) + 2.0 * gamma);
            sc.lambda.segment(off, q) = scale * lam;
            sc.soc.push_back(std::move(blk));
            off += q;
        }
        for (int d : K.psd) {
            int len = svec_len(d);
            MatrixXd S = smat(s.segment(off, len), d);
            MatrixXd Z = smat(z.segment(off, len), d);
            Eigen::LLT<MatrixXd> lltS(S), lltZ(Z);
            if (lltS.info() != Eigen::Success || lltZ.info() != Eigen::Success)
                throw std::runtime_error("NT scaling: point not interior (psd)");
            MatrixXd Ls = lltS.matrixL();
            MatrixXd Lz = lltZ.matrixL();
            Eigen::JacobiSVD<MatrixXd> svd(Lz.transpose() * Ls,
                                           Eigen::ComputeFullU | Eigen::ComputeFullV);
            VectorXd sig = svd.singularValues();
            if (sig.minCoeff() <= 0.0)
                throw std::runtime_error("NT scaling: degenerate psd pair");
            VectorXd isqrt = sig.array().sqrt().inverse();
            Psd blk;
            blk.R = Ls * svd.matrixV() * isqrt.asDiagonal();
            blk.Rinv = isqrt.asDiagonal() * svd.matrixU().transpose() * Lz.transpose();
            blk.Wp = blk.R * blk.R.transpose();
            blk.V = blk.Rinv.transpose() * blk.Rinv; // (R R')^{-1}
            sc.lambda.segment(off, len) = svec(sig.asDiagonal());
            sc.psd.push_back(std::move(blk));
            off += len;
        }
        return sc;
    }

    // -- elementary block maps ------------------------------------------

    /// W v  (scales a dual-side vector: W z = lambda).
    VectorXd scale_dual(const VectorXd& v) const {
        VectorXd r(v.size());
        int off = 0;
        for (int i = 0; i < dims.nonneg; ++i) r(off + i) = w_nonneg(i) * v(off + i);
        off += dims.nonneg;
        for (size_t b = 0; b < dims.soc.size(); ++b) {
            int q = dims.soc[b];
            r.segment(off, q) = soc_apply(soc[b], v.segment(off, q), false);
            off += q;
        }
        for (size_t b = 0; b < dims.psd.size(); ++b) {
            int d = dims.psd[b];
            int len = svec_len(d);
            MatrixXd X = smat(v.segment(off, len), d);
            r.segment(off, len) = svec(psd[b].R.transpose() * X * psd[b].R);
            off += len;
        }
        return r;
    }

    /// W^{-T} v  (scales a primal-side vector: W^{-T} s = lambda).
    VectorXd scale_primal(const VectorXd& v) const {
        VectorXd r(v.size());
        int off = 0;
        for (int i = 0; i < dims.nonneg; ++i) r(off + i) = v(off + i) / w_nonneg(i);
        off += dims.nonneg;
        for (size_t b = 0; b < dims.soc.size(); ++b) {
            int q = dims.soc[b];
            r.segment(off, q) = soc_apply(soc[b], v.segment(off, q), true);
            off += q;
        }
        for (size_t b = 0; b < dims.psd.size(); ++b) {
            int d = dims.psd[b];
            int len = svec_len(d);
            MatrixXd X = smat(v.segment(off, len), d);
            r.segment(off, len) = svec(psd[b].Rinv * X * psd[b].Rinv.transpose());
            off += len;
        }
        return r;
    }

    /// W' v  (maps scaled-space vectors back to primal deltas).
    VectorXd unscale_primal(const VectorXd& v) const {
        VectorXd r(v.size());
        int off = 0;
        for (int i = 0; i < dims.nonneg; ++i) r(off + i) = w_nonneg(i) * v(off + i);
        off += dims.nonneg;
        for (size_t b = 0; b < dims.soc.size(); ++b) {
            int q = dims.soc[b];
            r.segment(off, q) = soc_apply(soc[b], v.segment(off, q), false);
            off += q;
        }
        for (size_t b = 0; b < dims.psd.size(); ++b) {
            int d = dims.psd[b];
            int len = svec_len(d);
            MatrixXd X = smat(v.segment(off, len), d);
            r.segment(off, len) = svec(psd[b].R * X * psd[b].R.transpose());
            off += len;
        }
        return r;
    }

    /// (W'W) v.
    VectorXd w2_mul(const VectorXd& v) const {
        VectorXd r(v.size());
        int off = 0;
        for (int i = 0; i < dims.nonneg; ++i)
            r(off + i) = w_nonneg(i) * w_nonneg(i) * v(off + i);
        off += dims.nonneg;
        for (size_t b = 0; b < dims.soc.size(); ++b) {
            int q = dims.soc[b];
            auto vb = v.segment(off, q);
            const VectorXd& w = soc[b].wbar;
            // Wbar^2 = 2 wbar wbar' - J
            VectorXd t = 2.0 * w.dot(vb) * w;
            t(0) -= vb(0);
            t.tail(q - 1) += vb.tail(q - 1);
            r.segment(off, q) = soc[b].eta * t;
            off += q;
        }
        for (size_t b = 0; b < dims.psd.size(); ++b) {
            int d = dims.psd[b];
            int len = svec_len(d);
            MatrixXd X = smat(v.segment(off, len), d);
            r.segment(off, len) = svec(psd[b].Wp * X * psd[b].Wp);
            off += len;
        }
        return r;
    }

    /// (W'W)^{-1} v.
    VectorXd w2_solve(const VectorXd& v) const {
        VectorXd r(v.size());
        int off = 0;
        for (int i = 0; i < dims.nonneg; ++i)
            r(off + i) = v(off + i) / (w_nonneg(i) * w_nonneg(i));
        off += dims.nonneg;
        for (size_t b = 0; b < dims.soc.size(); ++b) {
            int q = dims.soc[b];
            auto vb = v.segment(off, q);
            const VectorXd& w = soc[b].wbar;
            // (Wbar^2)^{-1} = 2 (J wbar)(J wbar)' - J
            VectorXd jw(q);
            jw(0) = w(0);
            jw.tail(q - 1) = -w.tail(q - 1);
            VectorXd t = 2.0 * jw.dot(vb) * jw;
            t(0) -= vb(0);
            t.tail(q - 1) += vb.tail(q - 1);
            r.segment(off, q) = t / soc[b].eta;
            off += q;
        }
        for (size_t b = 0; b < dims.psd.size(); ++b) {
            int d = dims.psd[b];
            int len = svec_len(d);
            MatrixXd X = smat(v.segment(off, len), d);
            r.segment(off, len) = svec(psd[b].V * X * psd[b].V);
            off += len;
        }
        return r;
    }

    /// Jordan product u o v per block.
    VectorXd jordan_mul(const VectorXd& u, const VectorXd& v) const {
        VectorXd r(u.size());
        int off = 0;
        for (int i = 0; i < dims.nonneg; ++i) r(off + i) = u(off + i) * v(off + i);
        off += dims.nonneg;
        for (int q : dims.soc) {
            auto ub = u.segment(off, q);
            auto vb = v.segment(off, q);
            r(off) = ub.dot(vb);
            r.segment(off + 1, q - 1) = ub(0) * vb.tail(q - 1) + vb(0) * ub.tail(q - 1);
            off += q;
        }
        for (int d : dims.psd) {
            int len = svec_len(d);
            MatrixXd U = smat(u.segment(off, len), d);
            MatrixXd V = smat(v.segment(off, len), d);
            r.segment(off, len) = svec(0.5 * (U * V + V * U));
            off += len;
        }
        return r;
    }

    /// lambda^{-1} o v (inverse of the Jordan product with lambda).
    VectorXd lambda_solve(const VectorXd& v) const {
        VectorXd r(v.size());
        int off = 0;
        for (int i = 0; i < dims.nonneg; ++i) r(off + i) = v(off + i) / lambda(off + i);
        off += dims.nonneg;
        for (int q : dims.soc) {
            auto lb = lambda.segment(off, q);
            auto vb = v.segment(off, q);
            double det = lb(0) * lb(0) - lb.tail(q - 1).squaredNorm();
            double x0 = (lb(0) * vb(0) - lb.tail(q - 1).dot(vb.tail(q - 1))) / det;
            r(off) = x0;
            r.segment(off + 1, q - 1) = (vb.tail(q - 1) - x0 * lb.tail(q - 1)) / lb(0);
            off += q;
        }
        for (int d : dims.psd) {
            int len = svec_len(d);
            // lambda block is diagonal (sigma); solve (Sig X + X Sig)/2 = V
            MatrixXd Lam = smat(lambda.segment(off, len), d);
            MatrixXd V = smat(v.segment(off, len), d);
            MatrixXd X(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) X(i, j) = 2.0 * V(i, j) / (Lam(i, i) + Lam(j, j));
            r.segment(off, len) = svec(X);
            off += len;
        }
        return r;
    }
};

} // namespace mfris::conic::detail

#endif
