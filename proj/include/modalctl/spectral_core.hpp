#pragma once

// Modal spectral data for a truncated linear control system.
//
// A system is described only through its eigenvalues, their Jordan chain
// structure and the input coupling rows B*Psi_j (one row per adjoint
// generalized eigenvector). Eigenvectors themselves are never materialized:
// states are carried as per-mode coordinate blocks (v, Psi_j)^T.
//
// Coupling layout: within a mode, rows are grouped chain by chain in the
// order given by chain_lengths. The last row of each chain block corresponds
// to the adjoint eigenvector of that chain.

#include <cstddef>
#include <vector>

#include "modalctl/types.hpp"

namespace modalctl {

/// Single Jordan block lambda*I + E of size beta, E the superdiagonal nilpotent.
class JordanBlockMatrix {
   public:
    JordanBlockMatrix(Complex lambda, int size);

    Complex lambda() const { return lambda_; }
    int size() const { return size_; }

    CMatrix dense() const;
    CMatrix nilpotent() const;

   private:
    Complex lambda_;
    int size_;
};

JordanBlockMatrix make_jordan_block(Complex lambda, int beta);

/// exp(Lambda t) = e^{lambda t} sum_{k<beta} t^k/k! E^k, evaluated as the
/// exact finite sum. The result is upper-triangular Toeplitz.
CMatrix jordan_exp(const JordanBlockMatrix& block, double t);

class SpectralMode {
   public:
    SpectralMode(Complex lambda, std::vector<int> chain_lengths, CMatrix input_coupling, int index = 1);

    Complex lambda() const { return lambda_; }
    const std::vector<int>& chain_lengths() const { return chain_lengths_; }
    const CMatrix& input_coupling() const { return input_coupling_; }
    int index() const { return index_; }

    /// Algebraic multiplicity (sum of chain lengths).
    int beta() const { return beta_; }
    int input_dim() const { return static_cast<int>(input_coupling_.cols()); }
    int chain_count() const { return static_cast<int>(chain_lengths_.size()); }

    /// Row of input_coupling holding the adjoint eigenvector of each chain.
    std::vector<int> eigenvector_rows() const;

    /// Block-diagonal Jordan matrix over all chains (beta x beta).
    CMatrix jordan_matrix() const;
    CMatrix exp(double t) const;

    SpectralMode with_index(int index) const;
    SpectralMode with_coupling(CMatrix coupling) const;

   private:
    Complex lambda_;
    std::vector<int> chain_lengths_;
    CMatrix input_coupling_;
    int index_;
    int beta_;
};

/// Total order on eigenvalues: |lambda| ascending, then arg in (-pi, pi],
/// then imaginary part.
bool spectral_order_less(Complex a, Complex b);

/// Argument normalized to (-pi, pi].
double normalized_arg(Complex z);

class ModalSystem {
   public:
    /// Sorts modes by spectral_order_less and renumbers indices from 1.
    ModalSystem(std::vector<SpectralMode> modes, int input_dim, double expansion_time,
                double minimality_interval, bool interval_estimated = false);

    const std::vector<SpectralMode>& modes() const { return modes_; }
    const SpectralMode& mode(std::size_t j) const { return modes_.at(j); }
    std::size_t size() const { return modes_.size(); }
    bool empty() const { return modes_.empty(); }

    int input_dim() const { return input_dim_; }
    double expansion_time() const { return expansion_time_; }
    double minimality_interval() const { return minimality_interval_; }
    bool interval_estimated() const { return interval_estimated_; }

    /// T + nu, the horizon beyond which closure independence is asserted.
    double threshold_time() const { return expansion_time_ + minimality_interval_; }

    /// Sum of beta_j over the first n modes.
    int state_dim(std::size_t n) const;

   private:
    std::vector<SpectralMode> modes_;
    int input_dim_;
    double expansion_time_;
    double minimality_interval_;
    bool interval_estimated_;
};

/// Per-mode coordinate blocks; block j has length beta_j.
struct ModalVector {
    std::vector<CVector> blocks;

    static ModalVector zeros(const ModalSystem& system);
    static ModalVector constant(const ModalSystem& system, Complex value);

    double norm() const;
    bool matches(const ModalSystem& system) const;
};

/// S_n(t)v in modal coordinates: block j becomes exp(Lambda_j t) v_j for
/// j <= n and zero otherwise.
ModalVector truncated_semigroup_apply(const ModalSystem& system, const ModalVector& v, double t,
                                      std::size_t n);

/// max_j || [S_n(t1+t2)v - S_n(t1)S_n(t2)v]_j ||
double semigroup_property_check(const ModalSystem& system, const ModalVector& v, double t1, double t2,
                                std::size_t n);

}  // namespace modalctl
