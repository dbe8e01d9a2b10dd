#pragma once

// Per-mode approximate null-controllability tests on modal data.
//
// For mode j with Jordan matrix Lambda_j and coupling rows B*Psi_j the three
// tests are
//   rank    : rank [lambda_j I - Lambda_j | B*Psi_j] == beta_j
//   adjoint : (lambda_j I - Lambda_j)^H eta = 0 and (B*Psi_j)^H eta = 0 force eta = 0
//   eigenrow: the eigenvector row of every chain is nonzero
// The first two are equivalent; the third coincides with them on simple modes.

#include <string>
#include <vector>

#include "modalctl/spectral_core.hpp"

namespace modalctl {

inline constexpr double kDefaultRankTol = 1e-9;

struct ModeVerdict {
    int mode_index = 0;
    int beta = 0;
    int rank_found = 0;
    bool passes = false;
    // sigma_beta / sigma_max when the mode passes, 0 otherwise.
    double margin = 0.0;
    // sigma_beta / sigma_max regardless of the verdict, for borderline audits.
    double sigma_ratio = 0.0;
};

ModeVerdict rank_condition(const SpectralMode& mode, double rel_tol = kDefaultRankTol);

bool eigen_input_nonvanishing(const SpectralMode& mode, double abs_tol = 0.0);

bool adjoint_trivial_solution(const SpectralMode& mode, double rel_tol = kDefaultRankTol);

struct ControllabilityReport {
    std::vector<ModeVerdict> verdicts;
    int modes_checked = 0;
    bool passed = false;
    int failing_index = 0;      // smallest failing mode index, 0 when passed
    double sufficiency_horizon = 0.0;  // T + nu
    std::string horizon_note;

    /// "pass-up-to-N" or "fail-at-j".
    std::string verdict() const;
};

ControllabilityReport controllability_report(const ModalSystem& system, double rel_tol = kDefaultRankTol);

}  // namespace modalctl
