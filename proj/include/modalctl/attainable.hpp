#pragma once

// Attainable subspaces of finite modal truncations.
//
// The truncation to the first n modes is the finite system x' = Ax + Bu with
// A = diag(Lambda_1, ..., Lambda_n) and B the stacked coupling blocks. Its
// attainable set at time t is the range of the Gramian
//   G(t) = int_0^t e^{As} B B^H e^{A^H s} ds.

#include <string>
#include <vector>

#include "modalctl/spectral_core.hpp"

namespace modalctl {

struct TruncatedRealization {
    int state_dim = 0;
    CMatrix A;
    CMatrix B;
    std::vector<SpectralMode> modes;
    std::vector<int> offsets;  // first row of each mode block

    /// e^{As} B, assembled block by block from Jordan exponentials.
    CMatrix propagated_input(double s) const;
    CMatrix exp(double t) const;
};

TruncatedRealization realize(const ModalSystem& system, std::size_t n);

struct GramianOptions {
    int nodes_per_panel = 8;
    double rel_tol = 1e-10;
    int max_doublings = 14;
};

/// Gauss-Legendre panels, doubled until the relative change drops below
/// rel_tol; the result is symmetrized.
CMatrix gramian(const TruncatedRealization& real, double t, const GramianOptions& opts = {});

inline constexpr double kDefaultSubspaceTol = 1e-8;

struct SubspaceBasis {
    CMatrix basis;     // orthonormal columns
    RVector spectrum;  // Gramian eigenvalues, descending
    double rank_tol = kDefaultSubspaceTol;

    int dim() const { return static_cast<int>(basis.cols()); }
    int ambient_dim() const { return static_cast<int>(basis.rows()); }
};

/// Eigenvectors of G(t) with eigenvalue > rank_tol * largest eigenvalue.
SubspaceBasis attainable_subspace(const TruncatedRealization& real, double t, double rank_tol = kDefaultSubspaceTol,
                                  const GramianOptions& opts = {});

/// Same selection rule applied to a Hermitian PSD matrix.
SubspaceBasis hermitian_range(const CMatrix& g, double rank_tol);

/// Orthonormal basis of the column space: left singular vectors with
/// sigma > rank_tol * sigma_max.
SubspaceBasis column_space(const CMatrix& m, double rank_tol);

struct SubspaceDistance {
    double value = 0.0;  // sine of the largest principal angle; 1 on dimension mismatch
    int dim_u = 0;
    int dim_v = 0;
    bool dimension_mismatch = false;
};

SubspaceDistance subspace_distance(const SubspaceBasis& u, const SubspaceBasis& v);

struct PairVerdict {
    std::size_t i = 0, j = 0;
    double distance = 0.0;
    bool above_threshold = false;  // both horizons exceed T + nu
    bool independent = false;      // distance <= tolerance
    std::string note;
};

struct IndependenceReport {
    std::vector<double> horizons;
    std::vector<int> dims;
    std::vector<RVector> spectra;
    RMatrix distances;
    double threshold_time = 0.0;
    double distance_tol = 0.0;
    std::size_t modes_used = 0;
    std::vector<PairVerdict> pairs;
    bool monotone = true;
    bool passed = true;
};

IndependenceReport closure_independence_experiment(const ModalSystem& system, const std::vector<double>& horizons,
                                                   std::size_t n, double rank_tol = kDefaultSubspaceTol,
                                                   double distance_tol = 1e-6);

}  // namespace modalctl
