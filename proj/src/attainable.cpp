#include "modalctl/attainable.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "modalctl/errors.hpp"
#include "modalctl/parallel.hpp"
#include "modalctl/quadrature.hpp"

namespace modalctl {

CMatrix TruncatedRealization::propagated_input(double s) const {
    CMatrix out(state_dim, B.cols());
    for (std::size_t j = 0; j < modes.size(); ++j) {
        const int beta = modes[j].beta();
        out.middleRows(offsets[j], beta) = modes[j].exp(s) * modes[j].input_coupling();
    }
    return out;
}

CMatrix TruncatedRealization::exp(double t) const {
    CMatrix out = CMatrix::Zero(state_dim, state_dim);
    for (std::size_t j = 0; j < modes.size(); ++j) {
        const int beta = modes[j].beta();
        out.block(offsets[j], offsets[j], beta, beta) = modes[j].exp(t);
    }
    return out;
}

TruncatedRealization realize(const ModalSystem& system, std::size_t n) {
    if (n < 1 || n > system.size())
        throw InvalidArgument("realize: truncation index " + std::to_string(n) + " outside 1.." +
                              std::to_string(system.size()));
    TruncatedRealization r;
    r.state_dim = system.state_dim(n);
    r.A = CMatrix::Zero(r.state_dim, r.state_dim);
    r.B = CMatrix::Zero(r.state_dim, system.input_dim());
    int offset = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const auto& mode = system.mode(j);
        const int beta = mode.beta();
        r.A.block(offset, offset, beta, beta) = mode.jordan_matrix();
        r.B.middleRows(offset, beta) = mode.input_coupling();
        r.modes.push_back(mode);
        r.offsets.push_back(offset);
        offset += beta;
    }
    return r;
}

namespace {

CMatrix panel_sum(const TruncatedRealization& real, double t, int panels, const GaussLegendreRule& rule) {
    CMatrix g = CMatrix::Zero(real.state_dim, real.state_dim);
    const double h = t / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * h;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const CMatrix x = real.propagated_input(mid + 0.5 * h * rule.nodes[k]);
            g.noalias() += (0.5 * h * rule.weights[k]) * (x * x.adjoint());
        }
    }
    return g;
}

}  // namespace

CMatrix gramian(const TruncatedRealization& real, double t, const GramianOptions& opts) {
    if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("gramian: t must be finite and > 0");

    double max_abs = 0.0;
    for (const auto& m : real.modes) max_abs = std::max(max_abs, std::abs(m.lambda()));
    int panels = std::max(16, static_cast<int>(std::ceil(4.0 * t * max_abs)));
    const GaussLegendreRule rule = gauss_legendre(opts.nodes_per_panel);

    CMatrix g = panel_sum(real, t, panels, rule);
    for (int k = 0; k < opts.max_doublings; ++k) {
        panels *= 2;
        CMatrix finer = panel_sum(real, t, panels, rule);
        const double scale = finer.cwiseAbs().maxCoeff();
        const double change = (finer - g).cwiseAbs().maxCoeff();
        g = std::move(finer);
        if (!std::isfinite(scale)) break;
        if (change <= opts.rel_tol * scale) return 0.5 * (g + g.adjoint());
    }
    std::ostringstream msg;
    msg << "Gramian quadrature did not converge at t = " << t << " with " << panels << " panels";
    throw QuadratureError(msg.str(), 0.0, t);
}

SubspaceBasis hermitian_range(const CMatrix& g, double rank_tol) {
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
    const auto n = g.rows();
    SubspaceBasis out;
    out.rank_tol = rank_tol;
    out.spectrum = es.eigenvalues().reverse();
    const double top = n > 0 ? out.spectrum(0) : 0.0;
    int keep = 0;
    if (top > 0.0)
        while (keep < n && out.spectrum(keep) > rank_tol * top) ++keep;
    out.basis = es.eigenvectors().rightCols(keep).rowwise().reverse();
    return out;
}

SubspaceBasis column_space(const CMatrix& m, double rank_tol) {
    SubspaceBasis out;
    out.rank_tol = rank_tol;
    if (m.cols() == 0) {
        out.basis = CMatrix(m.rows(), 0);
        out.spectrum = RVector(0);
        return out;
    }
    const Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU);
    out.spectrum = svd.singularValues();
    const double top = out.spectrum.size() > 0 ? out.spectrum(0) : 0.0;
    int keep = 0;
    if (top > 0.0)
        while (keep < out.spectrum.size() && out.spectrum(keep) > rank_tol * top) ++keep;
    out.basis = svd.matrixU().leftCols(keep);
    return out;
}

SubspaceBasis attainable_subspace(const TruncatedRealization& real, double t, double rank_tol,
                                  const GramianOptions& opts) {
    return hermitian_range(gramian(real, t, opts), rank_tol);
}

SubspaceDistance subspace_distance(const SubspaceBasis& u, const SubspaceBasis& v) {
    if (u.ambient_dim() != v.ambient_dim()) throw InvalidArgument("subspace_distance: ambient dimensions differ");
    SubspaceDistance d;
    d.dim_u = u.dim();
    d.dim_v = v.dim();
    if (d.dim_u != d.dim_v) {
        d.dimension_mismatch = true;
        d.value = 1.0;
        return d;
    }
    if (d.dim_u == 0) return d;
    const CMatrix residual = v.basis - u.basis * (u.basis.adjoint() * v.basis);
    const Eigen::JacobiSVD<CMatrix> svd(residual);
    d.value = std::min(1.0, svd.singularValues()(0));
    return d;
}

IndependenceReport closure_independence_experiment(const ModalSystem& system, const std::vector<double>& horizons,
                                                   std::size_t n, double rank_tol, double distance_tol) {
    if (horizons.empty()) throw InvalidArgument("closure experiment needs at least one horizon");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        if (!(horizons[i] > 0.0) || !std::isfinite(horizons[i]))
            throw InvalidArgument("horizons must be finite and > 0");
        if (i > 0 && horizons[i] < horizons[i - 1]) throw InvalidArgument("horizons must be sorted ascending");
    }
    const TruncatedRealization real = realize(system, n);

    std::vector<SubspaceBasis> bases(horizons.size());
    parallel_for(horizons.size(), [&](std::size_t i) { bases[i] = attainable_subspace(real, horizons[i], rank_tol); });

    IndependenceReport rep;
    rep.horizons = horizons;
    rep.threshold_time = system.threshold_time();
    rep.distance_tol = distance_tol;
    rep.modes_used = n;
    const auto m = static_cast<Eigen::Index>(horizons.size());
    rep.distances = RMatrix::Zero(m, m);
    for (std::size_t i = 0; i < bases.size(); ++i) {
        rep.dims.push_back(bases[i].dim());
        rep.spectra.push_back(bases[i].spectrum);
        if (i > 0 && rep.dims[i] < rep.dims[i - 1]) rep.monotone = false;
    }
    for (std::size_t i = 0; i < bases.size(); ++i)
        for (std::size_t j = i + 1; j < bases.size(); ++j) {
            const SubspaceDistance d = subspace_distance(bases[i], bases[j]);
            rep.distances(i, j) = rep.distances(j, i) = d.value;

            PairVerdict pv;
            pv.i = i;
            pv.j = j;
            pv.distance = d.value;
            pv.above_threshold = horizons[i] > rep.threshold_time && horizons[j] > rep.threshold_time;
            pv.independent = d.value <= distance_tol;
            std::ostringstream note;
            if (pv.above_threshold)
                note << (pv.independent ? "closures agree" : "closures differ");
            else
                note << "below T + nu; not asserted";
            if (d.dimension_mismatch) note << " (dimensions " << d.dim_u << " vs " << d.dim_v << ")";
            pv.note = note.str();
            if (pv.above_threshold && !pv.independent) rep.passed = false;
            rep.pairs.push_back(std::move(pv));
        }
    if (!rep.monotone) rep.passed = false;
    return rep;
}

}  // namespace modalctl
