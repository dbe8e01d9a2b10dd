#include "modalctl/controllability.hpp"

#include <sstream>

#include "modalctl/errors.hpp"

namespace modalctl {

namespace {

void check_tol(double rel_tol) {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw InvalidArgument("relative rank tolerance must lie in (0, 1)");
}

}  // namespace

ModeVerdict rank_condition(const SpectralMode& mode, double rel_tol) {
    check_tol(rel_tol);
    const int beta = mode.beta();
    const int r = mode.input_dim();

    CMatrix block(beta, beta + r);
    block.leftCols(beta) = CMatrix::Identity(beta, beta) * mode.lambda() - mode.jordan_matrix();
    block.rightCols(r) = mode.input_coupling();

    const Eigen::JacobiSVD<CMatrix> svd(block);
    const RVector& s = svd.singularValues();  // descending, length beta
    const double smax = s(0);

    ModeVerdict v;
    v.mode_index = mode.index();
    v.beta = beta;
    if (smax > 0.0) {
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (s(i) > rel_tol * smax) ++v.rank_found;
        v.sigma_ratio = s(beta - 1) / smax;
    }
    v.passes = v.rank_found == beta;
    v.margin = v.passes ? v.sigma_ratio : 0.0;
    return v;
}

bool eigen_input_nonvanishing(const SpectralMode& mode, double abs_tol) {
    for (int row : mode.eigenvector_rows())
        if (!(mode.input_coupling().row(row).norm() > abs_tol)) return false;
    return true;
}

bool adjoint_trivial_solution(const SpectralMode& mode, double rel_tol) {
    check_tol(rel_tol);
    const int beta = mode.beta();
    const int r = mode.input_dim();

    // Acts on eta in C^beta.
    CMatrix stacked(beta + r, beta);
    stacked.topRows(beta) = (CMatrix::Identity(beta, beta) * mode.lambda() - mode.jordan_matrix()).adjoint();
    stacked.bottomRows(r) = mode.input_coupling().adjoint();

    const Eigen::JacobiSVD<CMatrix> svd(stacked);
    const RVector& s = svd.singularValues();
    const double smax = s(0);
    return smax > 0.0 && s(beta - 1) > rel_tol * smax;
}

std::string ControllabilityReport::verdict() const {
    return passed ? "pass-up-to-" + std::to_string(modes_checked) : "fail-at-" + std::to_string(failing_index);
}

ControllabilityReport controllability_report(const ModalSystem& system, double rel_tol) {
    if (system.empty()) throw InvalidArgument("controllability_report: system has no modes");

    ControllabilityReport rep;
    rep.modes_checked = static_cast<int>(system.size());
    for (const auto& mode : system.modes()) {
        rep.verdicts.push_back(rank_condition(mode, rel_tol));
        if (!rep.verdicts.back().passes && rep.failing_index == 0) rep.failing_index = mode.index();
    }
    rep.passed = rep.failing_index == 0;
    rep.sufficiency_horizon = system.threshold_time();

    std::ostringstream note;
    if (rep.passed) {
        note << "rank condition holds for the first " << rep.modes_checked
             << " modes; this supports approximate null-controllability on [0, t1] for t1 > T + nu = "
             << rep.sufficiency_horizon << "; for t1 in (0, " << rep.sufficiency_horizon
             << "] the criterion leaves controllability undetermined";
    } else {
        note << "rank condition fails at mode " << rep.failing_index
             << "; the system is not approximately null-controllable on any [0, t1]";
    }
    note << "; only the truncated spectrum (" << rep.modes_checked << " modes) was examined";
    rep.horizon_note = note.str();
    return rep;
}

}  // namespace modalctl
