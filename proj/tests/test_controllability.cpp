#include <cmath>
#include <random>

#include "doctest.h"
#include "modalctl/controllability.hpp"
#include "modalctl/presets.hpp"
#include "support.hpp"

using namespace modalctl;
using support::GaussInt;

namespace {

SpectralMode simple(Complex lambda, Complex c) { return SpectralMode(lambda, {1}, CMatrix::Constant(1, 1, c)); }

// Gaussian-integer mode: coupling entries with small integer parts, many zeros.
struct IntMode {
    SpectralMode mode;
    std::vector<std::vector<GaussInt>> block;  // [lambda I - Lambda | coupling]
};

IntMode random_int_mode(std::mt19937_64& rng, int beta, int r) {
    std::uniform_int_distribution<int> val(-2, 2), zero(0, 2);
    const std::vector<int> chains = support::random_chains(rng, beta);
    CMatrix c(beta, r);
    std::vector<std::vector<GaussInt>> block(beta, std::vector<GaussInt>(beta + r));
    for (int i = 0; i < beta; ++i)
        for (int j = 0; j < r; ++j) {
            GaussInt g{0, 0};
            if (zero(rng) != 0) g = {val(rng), val(rng)};
            c(i, j) = Complex(static_cast<double>(g.re), static_cast<double>(g.im));
            block[i][beta + j] = g;
        }
    // lambda I - Lambda = -E within each chain
    int row = 0;
    for (int len : chains) {
        for (int k = 0; k + 1 < len; ++k) block[row + k][row + k + 1] = {-1, 0};
        row += len;
    }
    const Complex lambda = support::random_complex(rng, 3.0);
    return {SpectralMode(lambda, chains, c), block};
}

}  // namespace

TEST_SUITE("rank condition") {
    TEST_CASE("simple modes") {
        const auto fail = rank_condition(simple(1.0, 0.0));
        CHECK_FALSE(fail.passes);
        CHECK(fail.rank_found == 0);
        CHECK(fail.margin == 0.0);
        const auto pass = rank_condition(simple(1.0, Complex(0.2, -3.0)));
        CHECK(pass.passes);
        CHECK(pass.rank_found == 1);
        CHECK(pass.margin > 0.0);
    }

    TEST_CASE("single 2-chain: eigenvector row decides") {
        CMatrix good(2, 1), bad(2, 1);
        good << 0.0, 2.0;
        bad << 2.0, 0.0;
        CHECK(rank_condition(SpectralMode(Complex(0, 1), {2}, good)).passes);
        const auto v = rank_condition(SpectralMode(Complex(0, 1), {2}, bad));
        CHECK_FALSE(v.passes);
        // [[0,-1,2],[0,0,0]] has rank 1
        CHECK(v.rank_found == support::exact_rank({{{0, 0}, {-1, 0}, {2, 0}}, {{0, 0}, {0, 0}, {0, 0}}}));
        CHECK(v.rank_found == 1);
    }

    TEST_CASE("rank agrees with exact Bareiss elimination on integer data") {
        std::mt19937_64 rng(31);
        for (int trial = 0; trial < 500; ++trial) {
            const int beta = 1 + trial % 4, r = 1 + (trial / 4) % 3;
            const IntMode im = random_int_mode(rng, beta, r);
            const int exact = support::exact_rank(im.block);
            const auto v = rank_condition(im.mode);
            CHECK(v.rank_found == exact);
            CHECK(v.passes == (exact == beta));
            CHECK(adjoint_trivial_solution(im.mode) == (exact == beta));
        }
    }

    TEST_CASE("margin is positive exactly when the mode passes") {
        std::mt19937_64 rng(32);
        for (int trial = 0; trial < 200; ++trial) {
            const IntMode im = random_int_mode(rng, 1 + trial % 4, 1 + trial % 3);
            const auto v = rank_condition(im.mode);
            CHECK((v.margin > 0.0) == v.passes);
            CHECK(v.sigma_ratio >= 0.0);
        }
    }
}

TEST_SUITE("eigenvector and adjoint tests") {
    TEST_CASE("eigenvector rows") {
        CHECK(eigen_input_nonvanishing(simple(1.0, 1.0)));
        CHECK_FALSE(eigen_input_nonvanishing(simple(1.0, 0.0)));
        CMatrix rows(2, 1);
        rows << 1.0, 0.0;
        CHECK_FALSE(eigen_input_nonvanishing(SpectralMode(0.0, {2}, rows)));
        CHECK(eigen_input_nonvanishing(simple(1.0, 1e-3), 1e-4));
        CHECK_FALSE(eigen_input_nonvanishing(simple(1.0, 1e-3), 1e-2));
    }

    TEST_CASE("adjoint triviality on simple modes") {
        CHECK(adjoint_trivial_solution(simple(1.0, 1.0)));
        CHECK_FALSE(adjoint_trivial_solution(simple(1.0, 0.0)));
    }

    TEST_CASE("simple modes: rank test and eigenvector test agree") {
        std::mt19937_64 rng(41);
        std::bernoulli_distribution zero(0.3);
        for (int trial = 0; trial < 1000; ++trial) {
            const int r = 1 + trial % 3;
            CMatrix c = support::random_matrix(rng, 1, r);
            for (int j = 0; j < r; ++j)
                if (zero(rng)) c(0, j) = 0.0;
            const SpectralMode m(support::random_complex(rng), {1}, c);
            CHECK(eigen_input_nonvanishing(m) == rank_condition(m).passes);
        }
    }

    TEST_CASE("beta = 3 with random nonzero couplings: adjoint equals rank") {
        std::mt19937_64 rng(42);
        for (int trial = 0; trial < 1000; ++trial) {
            const SpectralMode m(support::random_complex(rng), support::random_chains(rng, 3),
                                 support::random_matrix(rng, 3, 1 + trial % 3));
            CHECK(adjoint_trivial_solution(m) == rank_condition(m).passes);
        }
    }

    TEST_CASE("verdicts are invariant under coupling scaling") {
        std::mt19937_64 rng(43);
        for (int trial = 0; trial < 200; ++trial) {
            const IntMode im = random_int_mode(rng, 1 + trial % 4, 1 + trial % 3);
            const Complex s = support::random_complex(rng, 10.0);
            const SpectralMode scaled = im.mode.with_coupling(im.mode.input_coupling() * s);
            CHECK(rank_condition(scaled).passes == rank_condition(im.mode).passes);
            CHECK(adjoint_trivial_solution(scaled) == adjoint_trivial_solution(im.mode));
        }
    }

    TEST_CASE("verdicts are invariant under chain permutation") {
        std::mt19937_64 rng(44);
        for (int trial = 0; trial < 200; ++trial) {
            const IntMode im = random_int_mode(rng, 2 + trial % 3, 1 + trial % 2);
            const auto& chains = im.mode.chain_lengths();
            if (chains.size() < 2) continue;
            // reverse chain order, moving the row blocks along
            std::vector<int> rev(chains.rbegin(), chains.rend());
            std::vector<int> starts{0};
            for (int len : chains) starts.push_back(starts.back() + len);
            CMatrix c(im.mode.beta(), im.mode.input_dim());
            int row = 0;
            for (int k = static_cast<int>(chains.size()) - 1; k >= 0; --k) {
                c.middleRows(row, chains[k]) = im.mode.input_coupling().middleRows(starts[k], chains[k]);
                row += chains[k];
            }
            const SpectralMode perm(im.mode.lambda(), rev, c);
            CHECK(rank_condition(perm).passes == rank_condition(im.mode).passes);
            CHECK(eigen_input_nonvanishing(perm) == eigen_input_nonvanishing(im.mode));
        }
    }
}

TEST_SUITE("controllability report") {
    TEST_CASE("finite ODE passes up to N") {
        const auto rep = controllability_report(preset_finite_ode(5));
        CHECK(rep.passed);
        CHECK(rep.verdict() == "pass-up-to-5");
        CHECK(rep.failing_index == 0);
        CHECK(rep.modes_checked == 5);
        CHECK(rep.sufficiency_horizon == 1.0);
        CHECK(rep.horizon_note.find("only the truncated spectrum") != std::string::npos);
        CHECK(rep.horizon_note.find("undetermined") != std::string::npos);
    }

    TEST_CASE("smallest failing index is reported") {
        const ModalSystem sys({simple(-1.0, 1.0), simple(-2.0, 0.0), simple(-3.0, 1.0), simple(-4.0, 0.0)}, 1, 0.0, 1.0);
        const auto rep = controllability_report(sys);
        CHECK_FALSE(rep.passed);
        CHECK(rep.failing_index == 2);
        CHECK(rep.verdict() == "fail-at-2");
        CHECK(rep.verdicts.size() == 4);
    }

    TEST_CASE("wave preset verdicts against the closed-form elliptic coupling") {
        for (double mu : {0.5, 1.5, -2.0}) {
            const ModalSystem sys = preset_wave(6, mu);
            const auto rep = controllability_report(sys);
            for (std::size_t j = 0; j < sys.size(); ++j) {
                const auto& m = sys.mode(j);
                const int k = static_cast<int>(std::lround(std::abs(m.lambda().imag())));
                const double want = k == 0 ? 0.0 : support::wave_coupling(k, mu, 1.0, 1.0);
                CHECK(rep.verdicts[j].passes == (std::abs(want) > 1e-9));
            }
            CHECK(rep.verdict() == "fail-at-1");
        }
    }

    TEST_CASE("wave preset without the zero mode fails at the first even mode") {
        WavePresetOptions opts;
        opts.include_zero_mode = false;
        const auto rep = controllability_report(preset_wave(3, 0.5, opts));
        // order: -i, i, -2i, 2i, ...
        CHECK(rep.verdict() == "fail-at-3");
        opts.boundary = {1.0, 0.0};
        CHECK(controllability_report(preset_wave(3, 0.5, opts)).verdict() == "pass-up-to-6");
    }
}
