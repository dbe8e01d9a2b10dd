#pragma once

// Built-in models.
//
// wave: w_tt = w_thth on [0, pi], w(t,0) = b0 u(t), w(t,pi) = b_pi u(t), state
// (w, w_t) in W_0^1 x L_2 with the energy inner product. Modes lambda = +-ik,
// k = 1..K, are simple with adjoint eigenvectors
//   psi_k = (sin k theta, +-ik sin k theta) / (k sqrt(pi)).
// The coupling of a mode is (mu - lambda) <D_mu b, psi>, where D_mu b solves
// the elliptic problem w'' = mu^2 w, v = mu w with the boundary data b. The
// lambda = 0 entry of the spectrum has no eigenvector in W_0^1 x L_2 and is
// carried with zero coupling. nu = 2 pi, T = 0.

#include <array>

#include "modalctl/quasipoly.hpp"
#include "modalctl/spectral_core.hpp"

namespace modalctl {

struct WavePresetOptions {
    std::array<double, 2> boundary{1.0, 1.0};
    bool include_zero_mode = true;
};

ModalSystem preset_wave(int K, double mu, const WavePresetOptions& opts = {});

/// <D_mu b, psi_k^{sign}> by quadrature of the elliptic solution; k >= 1,
/// sign = +1 or -1 selects lambda = sign * i k. Values below 1e-12 of the
/// integrated |integrand| are returned as exact zeros.
Complex wave_elliptic_projection(int k, int sign, double mu, const std::array<double, 2>& boundary);

/// Diagonal ODE x' = diag(-1, ..., -n) x + c u; nu = 1, T = 0.
ModalSystem preset_finite_ode(int n, Complex coupling = 1.0);

/// Delta(z) = z - a0 z e^{-z h} - a e^{-z h}.
QuasiPolynomial preset_neutral_scalar(double a0, double a, double h);

}  // namespace modalctl
