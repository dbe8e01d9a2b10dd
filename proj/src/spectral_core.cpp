#include "modalctl/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "modalctl/errors.hpp"

namespace modalctl {

JordanBlockMatrix::JordanBlockMatrix(Complex lambda, int size) : lambda_(lambda), size_(size) {
    if (size < 1) throw InvalidArgument("Jordan block size must be >= 1, got " + std::to_string(size));
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
        throw InvalidArgument("Jordan block eigenvalue must be finite");
}

CMatrix JordanBlockMatrix::dense() const {
    CMatrix m = nilpotent();
    m.diagonal().setConstant(lambda_);
    return m;
}

CMatrix JordanBlockMatrix::nilpotent() const {
    CMatrix e = CMatrix::Zero(size_, size_);
    for (int i = 0; i + 1 < size_; ++i) e(i, i + 1) = 1.0;
    return e;
}

JordanBlockMatrix make_jordan_block(Complex lambda, int beta) { return JordanBlockMatrix(lambda, beta); }

CMatrix jordan_exp(const JordanBlockMatrix& block, double t) {
    if (!std::isfinite(t)) throw InvalidArgument("jordan_exp: t must be finite");
    const int beta = block.size();
    const Complex scale = std::exp(block.lambda() * t);

    // coeff[k] = t^k / k!
    std::vector<double> coeff(static_cast<std::size_t>(beta));
    coeff[0] = 1.0;
    for (int k = 1; k < beta; ++k) coeff[k] = coeff[k - 1] * t / static_cast<double>(k);

    CMatrix out = CMatrix::Zero(beta, beta);
    for (int i = 0; i < beta; ++i)
        for (int k = 0; i + k < beta; ++k) out(i, i + k) = scale * coeff[k];
    return out;
}

SpectralMode::SpectralMode(Complex lambda, std::vector<int> chain_lengths, CMatrix input_coupling, int index)
    : lambda_(lambda),
      chain_lengths_(std::move(chain_lengths)),
      input_coupling_(std::move(input_coupling)),
      index_(index),
      beta_(0) {
    if (!std::isfinite(lambda_.real()) || !std::isfinite(lambda_.imag()))
        throw InvalidArgument("mode eigenvalue must be finite");
    if (chain_lengths_.empty()) throw InvalidArgument("mode needs at least one Jordan chain");
    for (int len : chain_lengths_) {
        if (len < 1) throw InvalidArgument("Jordan chain lengths must be >= 1");
        beta_ += len;
    }
    if (input_coupling_.rows() != beta_)
        throw InvalidArgument("input coupling has " + std::to_string(input_coupling_.rows()) +
                              " rows, expected sum(chain_lengths) = " + std::to_string(beta_));
    if (input_coupling_.cols() < 1) throw InvalidArgument("input coupling needs at least one column");
    if (!input_coupling_.allFinite()) throw InvalidArgument("input coupling entries must be finite");
    if (index_ < 1) throw InvalidArgument("mode index must be positive");
}

std::vector<int> SpectralMode::eigenvector_rows() const {
    std::vector<int> rows;
    int offset = 0;
    for (int len : chain_lengths_) {
        offset += len;
        rows.push_back(offset - 1);
    }
    return rows;
}

CMatrix SpectralMode::jordan_matrix() const {
    CMatrix m = CMatrix::Zero(beta_, beta_);
    int offset = 0;
    for (int len : chain_lengths_) {
        m.block(offset, offset, len, len) = JordanBlockMatrix(lambda_, len).dense();
        offset += len;
    }
    return m;
}

CMatrix SpectralMode::exp(double t) const {
    CMatrix m = CMatrix::Zero(beta_, beta_);
    int offset = 0;
    for (int len : chain_lengths_) {
        m.block(offset, offset, len, len) = jordan_exp(JordanBlockMatrix(lambda_, len), t);
        offset += len;
    }
    return m;
}

SpectralMode SpectralMode::with_index(int index) const {
    return SpectralMode(lambda_, chain_lengths_, input_coupling_, index);
}

SpectralMode SpectralMode::with_coupling(CMatrix coupling) const {
    return SpectralMode(lambda_, chain_lengths_, std::move(coupling), index_);
}

double normalized_arg(Complex z) {
    double a = std::arg(z);
    if (a <= -std::numbers::pi) a = std::numbers::pi;
    return a;
}

bool spectral_order_less(Complex a, Complex b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma < mb;
    const double aa = normalized_arg(a), ab = normalized_arg(b);
    if (aa != ab) return aa < ab;
    return a.imag() < b.imag();
}

ModalSystem::ModalSystem(std::vector<SpectralMode> modes, int input_dim, double expansion_time,
                         double minimality_interval, bool interval_estimated)
    : input_dim_(input_dim),
      expansion_time_(expansion_time),
      minimality_interval_(minimality_interval),
      interval_estimated_(interval_estimated) {
    if (input_dim < 1) throw InvalidArgument("input_dim must be >= 1");
    if (!(expansion_time >= 0.0) || !std::isfinite(expansion_time))
        throw InvalidArgument("expansion_time must be finite and >= 0");
    if (!(minimality_interval >= 0.0) || !std::isfinite(minimality_interval))
        throw InvalidArgument("minimality_interval must be finite and >= 0");
    for (const auto& m : modes)
        if (m.input_dim() != input_dim)
            throw InvalidArgument("mode coupling has " + std::to_string(m.input_dim()) + " columns, system input_dim is " +
                                  std::to_string(input_dim));

    std::stable_sort(modes.begin(), modes.end(),
                     [](const SpectralMode& x, const SpectralMode& y) { return spectral_order_less(x.lambda(), y.lambda()); });
    for (std::size_t j = 1; j < modes.size(); ++j) {
        const Complex a = modes[j - 1].lambda(), b = modes[j].lambda();
        if (std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)))
            throw InvalidArgument("eigenvalues must be pairwise distinct (duplicate near " + std::to_string(a.real()) +
                                  (a.imag() < 0 ? "" : "+") + std::to_string(a.imag()) + "i)");
    }
    modes_.reserve(modes.size());
    for (std::size_t j = 0; j < modes.size(); ++j) modes_.push_back(modes[j].with_index(static_cast<int>(j) + 1));
}

int ModalSystem::state_dim(std::size_t n) const {
    if (n > modes_.size()) throw InvalidArgument("state_dim: n exceeds mode count");
    int d = 0;
    for (std::size_t j = 0; j < n; ++j) d += modes_[j].beta();
    return d;
}

ModalVector ModalVector::zeros(const ModalSystem& system) { return constant(system, 0.0); }

ModalVector ModalVector::constant(const ModalSystem& system, Complex value) {
    ModalVector v;
    for (const auto& m : system.modes()) v.blocks.push_back(CVector::Constant(m.beta(), value));
    return v;
}

double ModalVector::norm() const {
    double s = 0.0;
    for (const auto& b : blocks) s += b.squaredNorm();
    return std::sqrt(s);
}

bool ModalVector::matches(const ModalSystem& system) const {
    if (blocks.size() != system.size()) return false;
    for (std::size_t j = 0; j < blocks.size(); ++j)
        if (blocks[j].size() != system.mode(j).beta()) return false;
    return true;
}

ModalVector truncated_semigroup_apply(const ModalSystem& system, const ModalVector& v, double t, std::size_t n) {
    if (n > system.size())
        throw InvalidArgument("truncation index " + std::to_string(n) + " exceeds mode count " +
                              std::to_string(system.size()));
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("semigroup time must be finite and >= 0");
    if (!v.matches(system)) throw InvalidArgument("modal vector block layout does not match the system");

    ModalVector out;
    out.blocks.reserve(system.size());
    for (std::size_t j = 0; j < system.size(); ++j) {
        const auto& mode = system.mode(j);
        if (j < n)
            out.blocks.push_back(mode.exp(t) * v.blocks[j]);
        else
            out.blocks.push_back(CVector::Zero(mode.beta()));
    }
    return out;
}

double semigroup_property_check(const ModalSystem& system, const ModalVector& v, double t1, double t2,
                                std::size_t n) {
    const ModalVector joint = truncated_semigroup_apply(system, v, t1 + t2, n);
    const ModalVector split = truncated_semigroup_apply(system, truncated_semigroup_apply(system, v, t2, n), t1, n);
    double worst = 0.0;
    for (std::size_t j = 0; j < joint.blocks.size(); ++j)
        worst = std::max(worst, (joint.blocks[j] - split.blocks[j]).norm());
    return worst;
}

}  // namespace modalctl
