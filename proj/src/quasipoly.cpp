#include "modalctl/quasipoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "modalctl/errors.hpp"

namespace modalctl {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

QuasiPolynomial::QuasiPolynomial(int dim, std::vector<double> delays, std::vector<CMatrix> neutral_coeffs,
                                 std::vector<CMatrix> retarded_coeffs)
    : dim_(dim), delays_(std::move(delays)), neutral_(std::move(neutral_coeffs)), retarded_(std::move(retarded_coeffs)) {
    if (dim_ < 1) throw InvalidArgument("quasi-polynomial dimension must be >= 1");
    if (delays_.empty()) throw InvalidArgument("delay list must contain at least h_0 = 0");
    if (delays_.front() != 0.0) throw InvalidArgument("first delay must be exactly 0");
    for (std::size_t j = 1; j < delays_.size(); ++j)
        if (!(delays_[j] > delays_[j - 1]) || !std::isfinite(delays_[j]))
            throw InvalidArgument("delays must be finite and strictly increasing");
    if (neutral_.size() != delays_.size() || retarded_.size() != delays_.size())
        throw InvalidArgument("one neutral and one retarded coefficient matrix is required per delay");
    for (const auto* list : {&neutral_, &retarded_})
        for (const auto& m : *list) {
            if (m.rows() != dim_ || m.cols() != dim_)
                throw InvalidArgument("coefficient matrices must be " + std::to_string(dim_) + "x" + std::to_string(dim_));
            if (!m.allFinite()) throw InvalidArgument("coefficient matrices must be finite");
        }
}

QuasiPolynomial QuasiPolynomial::scalar(std::vector<double> delays, std::vector<Complex> neutral,
                                        std::vector<Complex> retarded) {
    std::vector<CMatrix> a0, a;
    for (Complex c : neutral) a0.push_back(CMatrix::Constant(1, 1, c));
    for (Complex c : retarded) a.push_back(CMatrix::Constant(1, 1, c));
    return QuasiPolynomial(1, std::move(delays), std::move(a0), std::move(a));
}

bool QuasiPolynomial::has_real_coefficients() const {
    for (const auto* list : {&neutral_, &retarded_})
        for (const auto& m : *list)
            if (!m.imag().isZero(0.0)) return false;
    return true;
}

double QuasiPolynomial::scaled_matrix(Complex z, CMatrix& m) const {
    const double scale = std::max(0.0, -z.real() * max_delay());
    m = CMatrix::Identity(dim_, dim_) * (z * std::exp(-scale));
    for (std::size_t j = 0; j < delays_.size(); ++j) {
        const Complex e = std::exp(-z * delays_[j] - scale);
        m -= (neutral_[j] * z + retarded_[j]) * e;
    }
    return scale;
}

void QuasiPolynomial::scaled_derivative(Complex z, double scale, CMatrix& dm) const {
    dm = CMatrix::Identity(dim_, dim_) * std::exp(-scale);
    for (std::size_t j = 0; j < delays_.size(); ++j) {
        const double h = delays_[j];
        const Complex e = std::exp(-z * h - scale);
        dm -= (neutral_[j] * (1.0 - z * h) - retarded_[j] * h) * e;
    }
}

ScaledValue delta_eval_scaled(const QuasiPolynomial& q, Complex z) {
    if (!finite(z)) throw InvalidArgument("delta_eval: z must be finite");
    CMatrix m;
    const double scale = q.scaled_matrix(z, m);
    const Eigen::PartialPivLU<CMatrix> lu(m);
    const CMatrix& packed = lu.matrixLU();

    Complex phase = lu.permutationP().determinant();
    double log_abs = q.dim() * scale;
    for (int i = 0; i < q.dim(); ++i) {
        const Complex u = packed(i, i);
        const double a = std::abs(u);
        if (a == 0.0) return {0.0, -std::numeric_limits<double>::infinity()};
        phase *= u / a;
        log_abs += std::log(a);
    }
    return {phase, log_abs};
}

Complex delta_eval(const QuasiPolynomial& q, Complex z) {
    const ScaledValue v = delta_eval_scaled(q, z);
    if (v.phase == Complex(0.0)) return 0.0;
    if (v.log_abs > std::log(std::numeric_limits<double>::max()))
        throw RangeOverflow("Delta(z) overflows double precision at z = (" + std::to_string(z.real()) + ", " +
                            std::to_string(z.imag()) + "); log|Delta| = " + std::to_string(v.log_abs));
    return v.phase * std::exp(v.log_abs);
}

double log_abs_delta(const QuasiPolynomial& q, Complex z) { return delta_eval_scaled(q, z).log_abs; }

Complex log_derivative(const QuasiPolynomial& q, Complex z) {
    CMatrix m, dm;
    const double scale = q.scaled_matrix(z, m);
    q.scaled_derivative(z, scale, dm);
    const Eigen::PartialPivLU<CMatrix> lu(m);
    for (int i = 0; i < q.dim(); ++i)
        if (lu.matrixLU()(i, i) == Complex(0.0))
            return {std::numeric_limits<double>::infinity(), 0.0};
    return lu.solve(dm).trace();
}

bool Rect::contains(Complex z, double slack) const {
    return z.real() >= re_min - slack && z.real() <= re_max + slack && z.imag() >= im_min - slack &&
           z.imag() <= im_max + slack;
}

namespace {

void validate_rect(const Rect& r) {
    for (double v : {r.re_min, r.re_max, r.im_min, r.im_max})
        if (!std::isfinite(v)) throw InvalidArgument("region bounds must be finite");
    if (!(r.re_min < r.re_max) || !(r.im_min < r.im_max))
        throw InvalidArgument("region must satisfy re_min < re_max and im_min < im_max");
}

// Point at fraction frac along edge 0..3, traversed counter-clockwise.
Complex boundary_point(const Rect& r, int edge, double frac) {
    switch (edge) {
        case 0: return {r.re_min + frac * r.width(), r.im_min};
        case 1: return {r.re_max, r.im_min + frac * r.height()};
        case 2: return {r.re_max - frac * r.width(), r.im_max};
        default: return {r.re_min, r.im_max - frac * r.height()};
    }
}

}  // namespace

WindingResult winding_number(const QuasiPolynomial& q, const Rect& rect, const RootSearchOptions& opts) {
    validate_rect(rect);
    const double perimeter = 2.0 * (rect.width() + rect.height());

    // Samples of Delta'/Delta at N points per edge, edge-major, counter-clockwise.
    int n = opts.min_samples_per_edge;
    std::vector<Complex> pts, vals;
    auto sample = [&](Complex z) {
        const Complex f = log_derivative(q, z);
        if (!finite(f) || std::abs(f) * perimeter > opts.conditioning_bound)
            throw BoundaryTooClose("argument-principle integrand too large near z = (" + std::to_string(z.real()) +
                                   ", " + std::to_string(z.imag()) + "); perturb the region boundary");
        return f;
    };
    for (int e = 0; e < 4; ++e)
        for (int k = 0; k < n; ++k) {
            pts.push_back(boundary_point(rect, e, static_cast<double>(k) / n));
            vals.push_back(sample(pts.back()));
        }

    auto trapezoid = [&]() {
        Complex sum = 0.0;
        const std::size_t m = pts.size();
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t k1 = (k + 1) % m;
            sum += 0.5 * (vals[k] + vals[k1]) * (pts[k1] - pts[k]);
        }
        return sum / Complex(0.0, 2.0 * std::numbers::pi);
    };

    Complex prev = trapezoid();
    while (n < opts.max_samples_per_edge) {
        std::vector<Complex> npts, nvals;
        npts.reserve(2 * pts.size());
        nvals.reserve(2 * pts.size());
        for (int e = 0; e < 4; ++e)
            for (int k = 0; k < n; ++k) {
                const std::size_t idx = static_cast<std::size_t>(e) * n + k;
                npts.push_back(pts[idx]);
                nvals.push_back(vals[idx]);
                npts.push_back(boundary_point(rect, e, (k + 0.5) / n));
                nvals.push_back(sample(npts.back()));
            }
        pts = std::move(npts);
        vals = std::move(nvals);
        n *= 2;
        const Complex cur = trapezoid();
        const double nearest = std::round(cur.real());
        if (std::abs(cur - prev) < opts.integer_tol && std::abs(cur - Complex(nearest, 0.0)) < opts.integer_tol)
            return {static_cast<int>(nearest), cur.real(), n};
        prev = cur;
    }
    throw BoundaryTooClose("winding integral did not settle on an integer (last value " + std::to_string(prev.real()) +
                           "); perturb the region boundary");
}

namespace {

class RootFinder {
   public:
    RootFinder(const QuasiPolynomial& q, double tol, const RootSearchOptions& opts) : q_(q), tol_(tol), opts_(opts) {}

    void search(const Rect& r, int count, int depth) {
        if (count <= 0) return;
        if (try_accept(r, count)) return;

        const double size = std::max(r.width(), r.height());
        if (depth >= opts_.max_depth || size < 1e-12 * (1.0 + std::abs(r.center()))) {
            const Complex c = r.center();
            out_.push_back({c, count, residual(c), false});
            return;
        }

        static constexpr double kFractions[] = {0.5, 0.4625, 0.5375, 0.425, 0.575, 0.3875, 0.6125, 0.35, 0.65};
        for (double f : kFractions) {
            Rect a = r, b = r;
            if (r.width() >= r.height()) {
                a.re_max = b.re_min = r.re_min + f * r.width();
            } else {
                a.im_max = b.im_min = r.im_min + f * r.height();
            }
            int wa = 0, wb = 0;
            try {
                wa = winding_number(q_, a, opts_).count;
                wb = winding_number(q_, b, opts_).count;
            } catch (const BoundaryTooClose&) {
                continue;
            }
            if (wa + wb != count || wa < 0 || wb < 0) continue;
            search(a, wa, depth + 1);
            search(b, wb, depth + 1);
            return;
        }
        // Every split line ran into a root; report the whole rectangle.
        const Complex c = r.center();
        out_.push_back({c, count, residual(c), false});
    }

    std::vector<RootCluster> take() { return std::move(out_); }

   private:
    double residual(Complex z) const {
        const ScaledValue v = delta_eval_scaled(q_, z);
        return v.phase == Complex(0.0) ? 0.0 : std::exp(v.log_abs);
    }

    // Modified Newton for a root of known multiplicity, started at the centre.
    std::optional<Complex> polish(const Rect& r, int multiplicity) const {
        Complex z = r.center();
        const double slack = 0.25 * std::max(r.width(), r.height());
        double last_step = std::numeric_limits<double>::infinity();
        for (int it = 0; it < 200; ++it) {
            const Complex ld = log_derivative(q_, z);
            if (!finite(ld)) return z;  // exact zero of Delta
            if (ld == Complex(0.0)) return std::nullopt;
            const Complex step = static_cast<double>(multiplicity) / ld;
            z -= step;
            if (!finite(z) || !r.contains(z, slack)) return std::nullopt;
            last_step = std::abs(step);
            if (last_step <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(z))) break;
        }
        if (last_step > 1e-10 * (1.0 + std::abs(z))) return std::nullopt;
        return z;
    }

    bool try_accept(const Rect& r, int count) {
        const auto z = polish(r, count);
        if (!z || !r.contains(*z)) return false;
        const double res = residual(*z);
        if (!(res <= tol_)) return false;
        if (count > 1) {
            const double rho = 1e-5 * (1.0 + std::abs(*z));
            const Rect small{z->real() - rho, z->real() + rho, z->imag() - rho, z->imag() + rho};
            try {
                if (winding_number(q_, small, opts_).count != count) return false;
            } catch (const BoundaryTooClose&) {
                return false;
            }
        }
        out_.push_back({*z, count, res, true});
        return true;
    }

    const QuasiPolynomial& q_;
    double tol_;
    RootSearchOptions opts_;
    std::vector<RootCluster> out_;
};

std::vector<RootCluster> merge_close(std::vector<RootCluster> roots) {
    std::vector<RootCluster> merged;
    for (auto& r : roots) {
        bool absorbed = false;
        for (auto& m : merged) {
            if (std::abs(m.location - r.location) < 1e-8 * (1.0 + std::abs(m.location))) {
                if (r.residual < m.residual) {
                    m.location = r.location;
                    m.residual = r.residual;
                }
                m.multiplicity += r.multiplicity;
                m.resolved = m.resolved && r.resolved;
                absorbed = true;
                break;
            }
        }
        if (!absorbed) merged.push_back(r);
    }
    return merged;
}

}  // namespace

std::vector<RootCluster> find_roots(const QuasiPolynomial& q, const Rect& region, double tol,
                                    const RootSearchOptions& opts) {
    validate_rect(region);
    if (!(tol > 0.0)) throw InvalidArgument("find_roots: tol must be > 0");

    const int total = winding_number(q, region, opts).count;
    RootFinder finder(q, tol, opts);
    finder.search(region, total, 0);

    auto roots = merge_close(finder.take());
    std::sort(roots.begin(), roots.end(),
              [](const RootCluster& a, const RootCluster& b) { return spectral_order_less(a.location, b.location); });
    return roots;
}

ExponentialTypeEstimate exponential_type(const QuasiPolynomial& q, const std::vector<double>& radii, int directions) {
    if (radii.size() < 2) throw InvalidArgument("exponential_type needs at least two radii");
    if (directions < 8) throw InvalidArgument("exponential_type needs at least 8 directions");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || !std::isfinite(radii[i])) throw InvalidArgument("radii must be finite and positive");
        if (i > 0 && !(radii[i] > radii[i - 1])) throw InvalidArgument("radii must be strictly increasing");
    }

    ExponentialTypeEstimate est;
    est.radii = radii;
    for (double r : radii) {
        double best = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < directions; ++k) {
            const double theta = 2.0 * std::numbers::pi * k / directions;
            best = std::max(best, log_abs_delta(q, std::polar(r, theta)) / r);
        }
        est.per_radius.push_back(best);
    }
    const std::size_t last = est.per_radius.size() - 1;
    est.omega = est.per_radius[last];
    est.spread = std::abs(est.per_radius[last] - est.per_radius[last - 1]);
    return est;
}

ModalSystem to_modal_system(const QuasiPolynomial& q, const std::vector<RootCluster>& roots,
                            const std::vector<CMatrix>& couplings, const ModalBridgeOptions& opts) {
    if (roots.empty()) throw InvalidArgument("to_modal_system: no roots supplied");
    if (couplings.size() != roots.size())
        throw InvalidArgument("to_modal_system: expected one coupling block per root (" + std::to_string(roots.size()) +
                              "), got " + std::to_string(couplings.size()));
    if (!opts.chain_lengths.empty() && opts.chain_lengths.size() != roots.size())
        throw InvalidArgument("to_modal_system: chain structure must be given for every root or none");
    if (!(opts.margin >= 0.0)) throw InvalidArgument("to_modal_system: margin must be >= 0");

    std::vector<SpectralMode> modes;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const auto& root = roots[i];
        if (!root.resolved) throw InvalidArgument("to_modal_system: root cluster " + std::to_string(i) + " is unresolved");
        for (std::size_t k = 0; k < i; ++k)
            if (std::abs(roots[k].location - root.location) <= 1e-8 * (1.0 + std::abs(root.location)))
                throw InvalidArgument("to_modal_system: roots must be pairwise distinct");
        std::vector<int> chains = opts.chain_lengths.empty() ? std::vector<int>{root.multiplicity} : opts.chain_lengths[i];
        int beta = 0;
        for (int c : chains) beta += c;
        if (beta != root.multiplicity)
            throw InvalidArgument("to_modal_system: chain lengths of root " + std::to_string(i) +
                                  " do not sum to its multiplicity");
        if (couplings[i].rows() != root.multiplicity)
            throw InvalidArgument("to_modal_system: coupling block " + std::to_string(i) + " has " +
                                  std::to_string(couplings[i].rows()) + " rows, multiplicity is " +
                                  std::to_string(root.multiplicity));
        if (couplings[i].cols() != couplings.front().cols())
            throw InvalidArgument("to_modal_system: coupling blocks must share one input dimension");
        modes.emplace_back(root.location, std::move(chains), couplings[i]);
    }

    const ExponentialTypeEstimate omega = exponential_type(q, opts.radii, opts.directions);
    const double nu = std::max(omega.omega, 0.0) * (1.0 + opts.margin);
    const double T = opts.expansion_time.value_or(q.max_delay());
    return ModalSystem(std::move(modes), static_cast<int>(couplings.front().cols()), T, nu, true);
}

}  // namespace modalctl
