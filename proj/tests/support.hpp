#pragma once

// Independent reference computations and random model generators shared by
// the unit and acceptance tests. Nothing here calls into the library's
// numerical kernels.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "modalctl/spectral_core.hpp"

namespace support {

using modalctl::CMatrix;
using modalctl::Complex;
using modalctl::CVector;

inline constexpr double kPi = std::numbers::pi;

/// Generic scaling-and-squaring exponential (Eigen's Pade implementation).
inline CMatrix expm(const CMatrix& a) { return a.exp(); }

/// Root of x - e^{-x} on [0, 1] by bisection.
inline double omega_bisection(double tol = 1e-15) {
    double lo = 0.0, hi = 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (mid - std::exp(-mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Gaussian integer for exact rank computations.
struct GaussInt {
    long long re = 0, im = 0;
    bool zero() const { return re == 0 && im == 0; }
    friend GaussInt operator*(GaussInt a, GaussInt b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
    friend GaussInt operator-(GaussInt a, GaussInt b) { return {a.re - b.re, a.im - b.im}; }
    // exact division, asserted by the Bareiss recurrence
    friend GaussInt operator/(GaussInt a, GaussInt b) {
        const long long n = b.re * b.re + b.im * b.im;
        const GaussInt p = a * GaussInt{b.re, -b.im};
        return {p.re / n, p.im / n};
    }
};

/// Exact rank over Q(i) by fraction-free (Bareiss) elimination.
inline int exact_rank(std::vector<std::vector<GaussInt>> m) {
    const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    GaussInt prev{1, 0};
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && m[piv][c].zero()) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[rank]);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j)
                m[i][j] = (m[rank][c] * m[i][j] - m[i][c] * m[rank][j]) / prev;
            m[i][c] = {};
        }
        prev = m[rank][c];
        ++rank;
    }
    return static_cast<int>(rank);
}

/// Kalman controllability subspace: orthonormal basis of range[B, AB, ...].
inline CMatrix kalman_basis(const CMatrix& a, const CMatrix& b, double rel_tol = 1e-10) {
    const auto d = a.rows();
    CMatrix k(d, d * b.cols());
    CMatrix blk = b;
    for (Eigen::Index i = 0; i < d; ++i) {
        // normalize each block column so powers of A do not swamp the rank test
        k.middleCols(i * b.cols(), b.cols()) = blk / std::max(blk.norm(), 1e-300);
        blk = a * blk;
    }
    Eigen::ColPivHouseholderQR<CMatrix> qr(k);
    qr.setThreshold(rel_tol);
    const auto r = qr.rank();
    const CMatrix q = qr.householderQ();
    return q.leftCols(r);
}

/// Gramian by composite trapezoid on [0, t] using the generic exponential.
inline CMatrix trapezoid_gramian(const CMatrix& a, const CMatrix& b, double t, int steps) {
    const double h = t / steps;
    const CMatrix step = expm(a * h);
    CMatrix e = CMatrix::Identity(a.rows(), a.cols());
    CMatrix g = CMatrix::Zero(a.rows(), a.rows());
    for (int i = 0; i <= steps; ++i) {
        const CMatrix eb = e * b;
        const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
        g += w * h * eb * eb.adjoint();
        e = step * e;
    }
    return g;
}

/// Closed-form wave coupling for mode +-ik with boundary data (b0, b_pi):
/// mu * (b_pi (-1)^k - b0) / sqrt(pi).
inline double wave_coupling(int k, double mu, double b0, double bpi) {
    return mu * (bpi * (k % 2 == 0 ? 1.0 : -1.0) - b0) / std::sqrt(kPi);
}

inline Complex random_complex(std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> n(0.0, scale);
    return {n(rng), n(rng)};
}

inline CMatrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = random_complex(rng, scale);
    return m;
}

/// Random chain partition of beta.
inline std::vector<int> random_chains(std::mt19937_64& rng, int beta) {
    std::vector<int> chains;
    int left = beta;
    while (left > 0) {
        const int len = std::uniform_int_distribution<int>(1, left)(rng);
        chains.push_back(len);
        left -= len;
    }
    return chains;
}

/// Distinct eigenvalues with real parts in [re_lo, re_hi], imaginary parts in
/// [-im_max, im_max] and pairwise separation at least sep.
inline std::vector<Complex> random_spectrum(std::mt19937_64& rng, int count, double re_lo, double re_hi, double im_max,
                                            double sep) {
    std::uniform_real_distribution<double> re(re_lo, re_hi), im(-im_max, im_max);
    std::vector<Complex> out;
    while (static_cast<int>(out.size()) < count) {
        const Complex z(re(rng), im(rng));
        bool ok = true;
        for (const auto& w : out) ok = ok && std::abs(z - w) >= sep;
        if (ok) out.push_back(z);
    }
    return out;
}

/// Random modal system with total state dimension d, input dimension r.
inline modalctl::ModalSystem random_system(std::mt19937_64& rng, int d, int r, double re_lo, double re_hi,
                                           double im_max, double sep, double coupling_scale = 1.0,
                                           int max_beta = 3) {
    std::vector<int> betas;
    int left = d;
    while (left > 0) {
        const int b = std::uniform_int_distribution<int>(1, std::min(left, max_beta))(rng);
        betas.push_back(b);
        left -= b;
    }
    const auto lambdas = random_spectrum(rng, static_cast<int>(betas.size()), re_lo, re_hi, im_max, sep);
    std::vector<modalctl::SpectralMode> modes;
    for (std::size_t j = 0; j < betas.size(); ++j)
        modes.emplace_back(lambdas[j], random_chains(rng, betas[j]), random_matrix(rng, betas[j], r, coupling_scale));
    return modalctl::ModalSystem(std::move(modes), r, 0.0, 1.0);
}

}  // namespace support
