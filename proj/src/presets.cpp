#include "modalctl/presets.hpp"

#include <cmath>
#include <numbers>

#include "modalctl/errors.hpp"
#include "modalctl/quadrature.hpp"

namespace modalctl {

namespace {

constexpr double kPi = std::numbers::pi;

// Solution of w'' = mu^2 w, w(0) = b0, w(pi) = b_pi, with its derivative.
// Written in decaying exponentials so large |mu| does not overflow.
struct EllipticSolution {
    double a;  // |mu|
    double b0, bpi;

    double denom() const { return 1.0 - std::exp(-2.0 * a * kPi); }

    // sinh(a(pi - th)) / sinh(a pi) and sinh(a th) / sinh(a pi)
    double left(double th) const { return (std::exp(-a * th) - std::exp(-a * (2.0 * kPi - th))) / denom(); }
    double right(double th) const { return (std::exp(-a * (kPi - th)) - std::exp(-a * (kPi + th))) / denom(); }
    // cosh(a(pi - th)) / sinh(a pi) and cosh(a th) / sinh(a pi)
    double left_c(double th) const { return (std::exp(-a * th) + std::exp(-a * (2.0 * kPi - th))) / denom(); }
    double right_c(double th) const { return (std::exp(-a * (kPi - th)) + std::exp(-a * (kPi + th))) / denom(); }

    double w(double th) const { return b0 * left(th) + bpi * right(th); }
    double dw(double th) const { return a * (-b0 * left_c(th) + bpi * right_c(th)); }
};

}  // namespace

Complex wave_elliptic_projection(int k, int sign, double mu, const std::array<double, 2>& boundary) {
    if (k < 1) throw InvalidArgument("wave projection needs k >= 1");
    if (sign != 1 && sign != -1) throw InvalidArgument("wave projection sign must be +1 or -1");
    if (!(mu != 0.0) || !std::isfinite(mu)) throw InvalidArgument("mu must be finite and off the spectrum");

    const EllipticSolution sol{std::abs(mu), boundary[0], boundary[1]};
    const Complex lambda(0.0, sign * static_cast<double>(k));
    const double norm = 1.0 / std::sqrt(kPi);
    // state x = (w, mu w); psi = (sin k th / k, lambda sin k th / k) / sqrt(pi)
    auto integrand = [&](double th) -> Complex {
        const double dpsi_w = norm * std::cos(k * th);
        const Complex psi_v = lambda * norm * std::sin(k * th) / static_cast<double>(k);
        return sol.dw(th) * dpsi_w + mu * sol.w(th) * std::conj(psi_v);
    };
    AdaptiveOptions opts;
    opts.rel_tol = 1e-13;
    const Complex value = integrate_adaptive(integrand, 0.0, kPi, opts);
    // Cancellation to below the noise floor of the quadrature is an exact zero
    // of the projection (b_pi (-1)^k = b0); report it as such.
    const Complex mass = integrate_adaptive([&](double th) { return Complex(std::abs(integrand(th))); }, 0.0, kPi, opts);
    return std::abs(value) <= 1e-12 * mass.real() ? Complex(0.0) : value;
}

ModalSystem preset_wave(int K, double mu, const WavePresetOptions& opts) {
    if (K < 1) throw InvalidArgument("wave preset needs K >= 1");
    if (!std::isfinite(mu)) throw InvalidArgument("mu must be finite");
    if (mu == 0.0) throw InvalidArgument("mu = 0 lies on the spectrum {+-ik}");

    std::vector<SpectralMode> modes;
    if (opts.include_zero_mode) modes.emplace_back(Complex(0.0), std::vector<int>{1}, CMatrix::Zero(1, 1));
    for (int k = 1; k <= K; ++k)
        for (int sign : {-1, 1}) {
            const Complex lambda(0.0, sign * static_cast<double>(k));
            const Complex coupling = (mu - lambda) * wave_elliptic_projection(k, sign, mu, opts.boundary);
            modes.emplace_back(lambda, std::vector<int>{1}, CMatrix::Constant(1, 1, coupling));
        }
    return ModalSystem(std::move(modes), 1, 0.0, 2.0 * kPi);
}

ModalSystem preset_finite_ode(int n, Complex coupling) {
    if (n < 1) throw InvalidArgument("ode preset needs n >= 1");
    std::vector<SpectralMode> modes;
    for (int k = 1; k <= n; ++k)
        modes.emplace_back(Complex(-static_cast<double>(k), 0.0), std::vector<int>{1}, CMatrix::Constant(1, 1, coupling));
    return ModalSystem(std::move(modes), 1, 0.0, 1.0);
}

QuasiPolynomial preset_neutral_scalar(double a0, double a, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("neutral preset needs a finite delay h > 0");
    return QuasiPolynomial::scalar({0.0, h}, {0.0, a0}, {0.0, a});
}

}  // namespace modalctl
