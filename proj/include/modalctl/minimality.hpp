#pragma once

// Finite sections of the exponential family f(t) = (-t)^k e^{-lambda t} on
// [0, nu]: Gram matrices, minimality margins and biorthogonal truncations.
//
// Everything here is finite-section evidence. A positive margin for the
// first n functions says nothing about the infinite family.

#include <string>
#include <vector>

#include "modalctl/spectral_core.hpp"
#include "modalctl/types.hpp"

namespace modalctl {

struct FamilyEntry {
    Complex lambda;
    int power = 0;
};

class ExponentialFamily {
   public:
    /// Validates distinct (lambda, power) pairs, contiguous powers 0..a-1 per
    /// lambda and interval_end > 0.
    ExponentialFamily(std::vector<FamilyEntry> entries, double interval_end);

    /// Only interval_end is checked. For diagnosing degenerate families, such
    /// as repeated functions.
    static ExponentialFamily unchecked(std::vector<FamilyEntry> entries, double interval_end);

    const std::vector<FamilyEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    double interval_end() const { return interval_end_; }

    Complex evaluate(std::size_t i, double t) const;

   private:
    struct NoCheck {};
    ExponentialFamily(std::vector<FamilyEntry> entries, double interval_end, NoCheck);

    std::vector<FamilyEntry> entries_;
    double interval_end_;
};

enum class GramMethod { ClosedForm, Adaptive };

struct QuadratureSpec {
    GramMethod method = GramMethod::ClosedForm;
    double rel_tol = 1e-12;
};

/// int_0^nu t^p e^{a t} dt in closed form (series for small |a nu|,
/// upward recurrence otherwise).
Complex power_exp_integral(int p, Complex a, double nu);

/// G_ij = int_0^nu f_i(t) conj(f_j(t)) dt for i, j < n.
CMatrix gram_matrix(const ExponentialFamily& fam, std::size_t n, const QuadratureSpec& quad = {});

/// Smallest eigenvalue of the n-th Gram section.
double minimality_margin(const ExponentialFamily& fam, std::size_t n, const QuadratureSpec& quad = {});

/// Wording used in reports for a section margin.
std::string finite_section_statement(std::size_t n, double margin);

/// Dual functions y_j(t) = sum_i C(i, j) conj(f_i(t)) with C = G_n^{-1}, so
/// that int_0^nu f_i y_j = delta_ij.
struct BiorthogonalTruncation {
    ExponentialFamily family;
    std::size_t n = 0;
    CMatrix coefficients;
    double margin = 0.0;
    double gram_condition = 0.0;
    double residual = 0.0;  // max |G C - I|

    Complex dual(std::size_t j, double t) const;
};

/// Throws IllConditionedFamily when margin <= rel_threshold * largest
/// eigenvalue, when Cholesky fails, or when the residual exceeds 1e-8.
BiorthogonalTruncation biorthogonal_truncation(const ExponentialFamily& fam, std::size_t n,
                                               double rel_threshold = 1e-10, const QuadratureSpec& quad = {});

/// max_ij |int_0^nu f_i y_j dt - delta_ij| with every integral of the
/// product f_i * y_j evaluated by adaptive quadrature.
double kronecker_residual(const BiorthogonalTruncation& trunc, double rel_tol = 1e-12);

/// Entries (lambda_j, k), k = 0..beta_j - 1, in mode order; nu from the system.
ExponentialFamily family_from_system(const ModalSystem& system);

}  // namespace modalctl
