#pragma once

// Characteristic quasi-polynomials of neutral delay equations with
// finitely many discrete delays 0 = h_0 < h_1 < ... < h_m:
//
//   Delta(z) = det( zI - sum_j A0_j z e^{-z h_j} - sum_j A_j e^{-z h_j} )
//
// A_j / A0_j are the jumps of the (piecewise-constant) kernels at -h_j; the
// j = 0 entries are the undelayed coefficients.

#include <optional>
#include <vector>

#include "modalctl/spectral_core.hpp"
#include "modalctl/types.hpp"

namespace modalctl {

class QuasiPolynomial {
   public:
    QuasiPolynomial(int dim, std::vector<double> delays, std::vector<CMatrix> neutral_coeffs,
                    std::vector<CMatrix> retarded_coeffs);

    /// Scalar (n = 1) convenience constructor.
    static QuasiPolynomial scalar(std::vector<double> delays, std::vector<Complex> neutral,
                                  std::vector<Complex> retarded);

    int dim() const { return dim_; }
    const std::vector<double>& delays() const { return delays_; }
    const std::vector<CMatrix>& neutral_coeffs() const { return neutral_; }
    const std::vector<CMatrix>& retarded_coeffs() const { return retarded_; }
    double max_delay() const { return delays_.back(); }
    bool has_real_coefficients() const;

    /// Characteristic matrix multiplied by e^{-scale}; scale is chosen so the
    /// dominant exponential has unit magnitude. Returns the scale.
    double scaled_matrix(Complex z, CMatrix& m) const;
    /// d/dz of the characteristic matrix, multiplied by e^{-scale}.
    void scaled_derivative(Complex z, double scale, CMatrix& dm) const;

   private:
    int dim_;
    std::vector<double> delays_;
    std::vector<CMatrix> neutral_;
    std::vector<CMatrix> retarded_;
};

/// Delta(z) = phase * exp(log_abs); phase is 0 when Delta vanishes exactly.
struct ScaledValue {
    Complex phase;
    double log_abs;
};

ScaledValue delta_eval_scaled(const QuasiPolynomial& q, Complex z);

/// Delta(z). Throws RangeOverflow when |Delta| exceeds the double range.
Complex delta_eval(const QuasiPolynomial& q, Complex z);

/// log|Delta(z)|, -inf at exact zeros; never overflows.
double log_abs_delta(const QuasiPolynomial& q, Complex z);

/// Delta'(z)/Delta(z) = tr(M(z)^{-1} M'(z)).
Complex log_derivative(const QuasiPolynomial& q, Complex z);

struct Rect {
    double re_min, re_max, im_min, im_max;

    bool contains(Complex z, double slack = 0.0) const;
    Complex center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
    double width() const { return re_max - re_min; }
    double height() const { return im_max - im_min; }
};

struct WindingResult {
    int count = 0;
    double raw = 0.0;        // real part of (1/2 pi i) * contour integral
    int samples_per_edge = 0;
};

struct RootSearchOptions {
    int max_depth = 48;
    int min_samples_per_edge = 32;
    int max_samples_per_edge = 1 << 14;
    double integer_tol = 1e-3;
    // Contour integrand bound: max |Delta'/Delta| * perimeter.
    double conditioning_bound = 1e7;
};

/// Number of zeros (with multiplicity) inside rect by trapezoidal quadrature
/// of Delta'/Delta along the boundary, refined by doubling.
WindingResult winding_number(const QuasiPolynomial& q, const Rect& rect, const RootSearchOptions& opts = {});

struct RootCluster {
    Complex location;
    int multiplicity = 1;
    double residual = 0.0;   // |Delta(location)|
    bool resolved = true;
};

/// All zeros in rect, each with its local winding number as multiplicity,
/// sorted by spectral_order_less. Unresolvable clusters are returned with
/// resolved = false.
std::vector<RootCluster> find_roots(const QuasiPolynomial& q, const Rect& region, double tol,
                                    const RootSearchOptions& opts = {});

struct ExponentialTypeEstimate {
    double omega = 0.0;
    double spread = 0.0;
    std::vector<double> radii;
    std::vector<double> per_radius;  // max_theta log|Delta(r e^{i theta})| / r
};

ExponentialTypeEstimate exponential_type(const QuasiPolynomial& q, const std::vector<double>& radii, int directions);

struct ModalBridgeOptions {
    double margin = 0.05;
    std::vector<double> radii{50.0, 100.0, 200.0};
    int directions = 64;
    // Defaults to the largest delay.
    std::optional<double> expansion_time;
    // Per-root chain structure; a single chain of length multiplicity when empty.
    std::vector<std::vector<int>> chain_lengths;
};

/// Modal system with nu = omega_estimate * (1 + margin); nu is flagged as
/// estimated. couplings[i] belongs to roots[i].
ModalSystem to_modal_system(const QuasiPolynomial& q, const std::vector<RootCluster>& roots,
                            const std::vector<CMatrix>& couplings, const ModalBridgeOptions& opts = {});

}  // namespace modalctl
