#include <cmath>

#include "doctest.h"
#include "modalctl/errors.hpp"
#include "modalctl/presets.hpp"
#include "support.hpp"

using namespace modalctl;

TEST_CASE("wave spectrum") {
    const ModalSystem k1 = preset_wave(1, 0.5);
    REQUIRE(k1.size() == 3);
    CHECK(k1.mode(0).lambda() == Complex(0.0));
    CHECK(k1.mode(1).lambda() == Complex(0, -1));
    CHECK(k1.mode(2).lambda() == Complex(0, 1));

    const ModalSystem k5 = preset_wave(5, 0.5);
    CHECK(k5.size() == 11);
    CHECK(k5.minimality_interval() == doctest::Approx(2.0 * support::kPi));
    CHECK(k5.expansion_time() == 0.0);
    for (const auto& m : k5.modes()) {
        CHECK(m.beta() == 1);
        CHECK(m.lambda().real() == 0.0);
    }
    CHECK(preset_wave(8, 0.5).size() == 17);
}

TEST_CASE("wave couplings match the closed-form elliptic solution") {
    for (double mu : {0.5, 1.5, 3.0, -0.7})
        for (std::array<double, 2> b : {std::array<double, 2>{1.0, 1.0}, {1.0, 0.0}, {0.3, -2.0}}) {
            WavePresetOptions opts;
            opts.boundary = b;
            const ModalSystem sys = preset_wave(7, mu, opts);
            for (const auto& m : sys.modes()) {
                const int k = static_cast<int>(std::lround(std::abs(m.lambda().imag())));
                const Complex got = m.input_coupling()(0, 0);
                const double want = k == 0 ? 0.0 : support::wave_coupling(k, mu, b[0], b[1]);
                CHECK(std::abs(got - want) < 1e-10 * (1.0 + std::abs(want)));
            }
        }
}

TEST_CASE("wave couplings are conjugate-symmetric") {
    const ModalSystem sys = preset_wave(6, 1.5);
    for (const auto& m : sys.modes()) {
        if (m.lambda() == Complex(0.0)) continue;
        const auto it = std::find_if(sys.modes().begin(), sys.modes().end(),
                                     [&](const SpectralMode& s) { return s.lambda() == std::conj(m.lambda()); });
        REQUIRE(it != sys.modes().end());
        CHECK(std::abs(it->input_coupling()(0, 0) - std::conj(m.input_coupling()(0, 0))) < 1e-12);
    }
}

TEST_CASE("projection onto each eigenfunction pair") {
    // <D_mu b, psi> = mu (b_pi (-1)^k - b0) / ((mu - i s k) sqrt(pi))
    for (int k : {1, 2, 5})
        for (int s : {-1, 1}) {
            const double mu = 0.8;
            const Complex got = wave_elliptic_projection(k, s, mu, {1.0, 1.0});
            const Complex want = support::wave_coupling(k, mu, 1.0, 1.0) / (mu - Complex(0, s * k));
            CHECK(std::abs(got - want) < 1e-12);
        }
    CHECK_THROWS_AS(wave_elliptic_projection(0, 1, 0.5, {1.0, 1.0}), InvalidArgument);
}

TEST_CASE("wave argument validation") {
    CHECK_THROWS_AS(preset_wave(0, 0.5), InvalidArgument);
    CHECK_THROWS_AS(preset_wave(3, 0.0), InvalidArgument);
    CHECK_THROWS_AS(preset_wave(3, NAN), InvalidArgument);
}

TEST_CASE("finite ODE preset") {
    const ModalSystem sys = preset_finite_ode(4, Complex(0.0, 2.0));
    REQUIRE(sys.size() == 4);
    for (std::size_t j = 0; j < 4; ++j) {
        CHECK(sys.mode(j).lambda() == Complex(-static_cast<double>(j + 1)));
        CHECK(sys.mode(j).input_coupling()(0, 0) == Complex(0.0, 2.0));
    }
    CHECK_THROWS_AS(preset_finite_ode(0), InvalidArgument);
}

TEST_CASE("neutral scalar preset") {
    const QuasiPolynomial q = preset_neutral_scalar(0.5, 1.0, 2.0);
    CHECK(q.delays() == std::vector<double>{0.0, 2.0});
    const Complex z(0.3, -1.1);
    const Complex want = z - 0.5 * z * std::exp(-2.0 * z) - std::exp(-2.0 * z);
    CHECK(std::abs(delta_eval(q, z) - want) < 1e-14);
    CHECK_THROWS_AS(preset_neutral_scalar(0.5, 1.0, 0.0), InvalidArgument);
}
