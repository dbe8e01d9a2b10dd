#include "modalctl/minimality.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "modalctl/errors.hpp"
#include "modalctl/quadrature.hpp"

namespace modalctl {

ExponentialFamily::ExponentialFamily(std::vector<FamilyEntry> entries, double interval_end)
    : ExponentialFamily(std::move(entries), interval_end, NoCheck{}) {
    // powers per distinct lambda must be exactly {0, ..., a-1}
    std::vector<std::pair<Complex, std::vector<int>>> groups;
    for (const auto& e : entries_) {
        if (e.power < 0) throw InvalidArgument("family powers must be >= 0");
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == e.lambda; });
        if (it == groups.end()) {
            groups.push_back({e.lambda, {e.power}});
        } else {
            if (std::find(it->second.begin(), it->second.end(), e.power) != it->second.end())
                throw InvalidArgument("family entries must be distinct (lambda, power) pairs");
            it->second.push_back(e.power);
        }
    }
    for (auto& [lambda, powers] : groups) {
        std::sort(powers.begin(), powers.end());
        for (std::size_t k = 0; k < powers.size(); ++k)
            if (powers[k] != static_cast<int>(k))
                throw InvalidArgument("powers for each lambda must form the contiguous range 0..a-1");
    }
}

ExponentialFamily::ExponentialFamily(std::vector<FamilyEntry> entries, double interval_end, NoCheck)
    : entries_(std::move(entries)), interval_end_(interval_end) {
    if (!(interval_end_ > 0.0) || !std::isfinite(interval_end_))
        throw InvalidArgument("family interval end must be finite and > 0");
    for (const auto& e : entries_)
        if (!std::isfinite(e.lambda.real()) || !std::isfinite(e.lambda.imag()))
            throw InvalidArgument("family exponents must be finite");
}

ExponentialFamily ExponentialFamily::unchecked(std::vector<FamilyEntry> entries, double interval_end) {
    return ExponentialFamily(std::move(entries), interval_end, NoCheck{});
}

Complex ExponentialFamily::evaluate(std::size_t i, double t) const {
    const auto& e = entries_.at(i);
    return std::pow(-t, e.power) * std::exp(-e.lambda * t);
}

Complex power_exp_integral(int p, Complex a, double nu) {
    // nu^{p+1} * J(p, c), J(p, c) = int_0^1 s^p e^{c s} ds, c = a nu
    const Complex c = a * nu;
    Complex j;
    if (std::abs(c) <= p + 1.0) {
        Complex term = 1.0;  // c^m / m!
        j = 0.0;
        for (int m = 0; m < 400; ++m) {
            const Complex add = term / static_cast<double>(p + m + 1);
            j += add;
            if (m > std::abs(c) && std::abs(add) <= 1e-18 * std::abs(j)) break;
            term *= c / static_cast<double>(m + 1);
        }
    } else {
        const Complex ec = std::exp(c);
        j = (ec - 1.0) / c;
        for (int k = 1; k <= p; ++k) j = (ec - static_cast<double>(k) * j) / c;
    }
    return std::pow(nu, p + 1) * j;
}

namespace {

void check_section(const ExponentialFamily& fam, std::size_t n) {
    if (n < 1 || n > fam.size())
        throw InvalidArgument("section size " + std::to_string(n) + " outside 1.." + std::to_string(fam.size()));
}

}  // namespace

CMatrix gram_matrix(const ExponentialFamily& fam, std::size_t n, const QuadratureSpec& quad) {
    check_section(fam, n);
    const double nu = fam.interval_end();
    const auto& e = fam.entries();
    const auto sz = static_cast<Eigen::Index>(n);
    CMatrix g(sz, sz);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            Complex v;
            if (quad.method == GramMethod::ClosedForm) {
                const int p = e[i].power + e[j].power;
                const double sign = (p % 2 == 0) ? 1.0 : -1.0;
                v = sign * power_exp_integral(p, -(e[i].lambda + std::conj(e[j].lambda)), nu);
            } else {
                AdaptiveOptions opts;
                opts.rel_tol = quad.rel_tol;
                v = integrate_adaptive([&](double t) { return fam.evaluate(i, t) * std::conj(fam.evaluate(j, t)); }, 0.0,
                                       nu, opts);
            }
            g(i, j) = v;
            g(j, i) = std::conj(v);
        }
        g(i, i) = g(i, i).real();
    }
    return g;
}

double minimality_margin(const ExponentialFamily& fam, std::size_t n, const QuadratureSpec& quad) {
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(gram_matrix(fam, n, quad), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

std::string finite_section_statement(std::size_t n, double margin) {
    std::ostringstream s;
    s << "sections 1.." << n << (margin > 0.0 ? " independent" : " not independent") << " with margin m(" << n
      << ") = " << margin << "; finite-section evidence, not a proof of minimality of the infinite family";
    return s.str();
}

Complex BiorthogonalTruncation::dual(std::size_t j, double t) const {
    Complex y = 0.0;
    for (std::size_t i = 0; i < n; ++i) y += coefficients(i, j) * std::conj(family.evaluate(i, t));
    return y;
}

BiorthogonalTruncation biorthogonal_truncation(const ExponentialFamily& fam, std::size_t n, double rel_threshold,
                                               const QuadratureSpec& quad) {
    const CMatrix g = gram_matrix(fam, n, quad);
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(g, Eigen::EigenvaluesOnly);
    const double smallest = es.eigenvalues()(0);
    const double largest = es.eigenvalues()(es.eigenvalues().size() - 1);
    if (!(smallest > rel_threshold * largest)) {
        std::ostringstream msg;
        msg << "Gram section of size " << n << " is ill-conditioned: margin " << smallest << " <= " << rel_threshold
            << " * " << largest;
        throw IllConditionedFamily(msg.str(), smallest);
    }

    // Cholesky on the equilibrated matrix D G D, D = diag(G_ii^{-1/2}).
    const RVector d = g.diagonal().real().cwiseSqrt().cwiseInverse();
    const CMatrix scaled = d.asDiagonal() * g * d.asDiagonal();
    const Eigen::LLT<CMatrix> llt(scaled);
    if (llt.info() != Eigen::Success) throw IllConditionedFamily("Cholesky factorization of the Gram section failed", smallest);
    const auto sz = static_cast<Eigen::Index>(n);
    const CMatrix inv = llt.solve(CMatrix::Identity(sz, sz));

    BiorthogonalTruncation out{fam, n, d.asDiagonal() * inv * d.asDiagonal(), smallest, largest / smallest, 0.0};
    out.residual = (g * out.coefficients - CMatrix::Identity(sz, sz)).cwiseAbs().maxCoeff();
    if (!(out.residual <= 1e-8)) {
        std::ostringstream msg;
        msg << "biorthogonal residual " << out.residual << " exceeds 1e-8";
        throw IllConditionedFamily(msg.str(), smallest);
    }
    return out;
}

double kronecker_residual(const BiorthogonalTruncation& trunc, double rel_tol) {
    AdaptiveOptions opts;
    opts.rel_tol = rel_tol;
    double worst = 0.0;
    for (std::size_t i = 0; i < trunc.n; ++i)
        for (std::size_t j = 0; j < trunc.n; ++j) {
            const Complex v = integrate_adaptive(
                [&](double t) { return trunc.family.evaluate(i, t) * trunc.dual(j, t); }, 0.0,
                trunc.family.interval_end(), opts);
            worst = std::max(worst, std::abs(v - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

ExponentialFamily family_from_system(const ModalSystem& system) {
    if (system.empty()) throw InvalidArgument("family_from_system: system has no modes");
    if (!(system.minimality_interval() > 0.0))
        throw InvalidArgument("family_from_system: minimality interval nu must be > 0");
    std::vector<FamilyEntry> entries;
    for (const auto& mode : system.modes())
        for (int k = 0; k < mode.beta(); ++k) entries.push_back({mode.lambda(), k});
    return ExponentialFamily(std::move(entries), system.minimality_interval());
}

}  // namespace modalctl
