#include "modalctl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "modalctl/errors.hpp"

namespace modalctl {

namespace {

// Returns (P_n(x), P_n'(x)).
std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

GaussLegendreRule gauss_legendre(int n) {
    if (n < 1) throw InvalidArgument("gauss_legendre: n must be >= 1");
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, dp] = legendre(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double dp = legendre(n, x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

namespace {

// Kronrod 15-point abscissae and weights with the embedded Gauss 7-point weights.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b;
    Complex value;
    double error;
    double abs_value;
};

Segment kronrod(const std::function<Complex(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    Complex fv[15];
    fv[7] = f(c);
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        fv[j] = f(c - dx);
        fv[14 - j] = f(c + dx);
    }
    Complex rk = fv[7] * kWgk[7];
    Complex rg = fv[7] * kWg[3];
    double rabs = std::abs(fv[7]) * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        rk += kWgk[j] * (fv[j] + fv[14 - j]);
        rabs += kWgk[j] * (std::abs(fv[j]) + std::abs(fv[14 - j]));
        if (j % 2 == 1) rg += kWg[j / 2] * (fv[j] + fv[14 - j]);
    }
    // QUADPACK qk15 error scaling and roundoff floor
    const Complex mean = 0.5 * rk;
    double rasc = kWgk[7] * std::abs(fv[7] - mean);
    for (int j = 0; j < 7; ++j) rasc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
    const double ah = std::abs(h);
    double err = std::abs((rk - rg) * h);
    rasc *= ah;
    if (rasc != 0.0 && err != 0.0) err = rasc * std::min(1.0, std::pow(200.0 * err / rasc, 1.5));
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * rabs * ah;
    return {a, b, rk * h, std::max(err, roundoff), rabs * ah};
}

}  // namespace

Complex integrate_adaptive(const std::function<Complex(double)>& f, double a, double b, const AdaptiveOptions& opts) {
    if (!std::isfinite(a) || !std::isfinite(b)) throw InvalidArgument("integrate_adaptive: finite limits required");
    if (a == b) return 0.0;

    std::vector<Segment> segs{kronrod(f, a, b)};
    while (true) {
        Complex total = 0.0;
        double err = 0.0, absval = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total += segs[i].value;
            err += segs[i].error;
            absval += segs[i].abs_value;
            if (segs[i].error > segs[worst].error) worst = i;
        }
        const double floor = opts.abs_tol > 0.0 ? opts.abs_tol : opts.rel_tol * 1e-2 * absval;
        // error estimates never drop below the accumulated roundoff level
        const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * absval;
        const double target = std::max({opts.rel_tol * std::abs(total), floor, 2.0 * roundoff});
        if (err <= target || err == 0.0) return total;
        if (static_cast<int>(segs.size()) >= opts.max_intervals || !std::isfinite(err)) {
            std::ostringstream msg;
            msg << "adaptive quadrature did not converge: error estimate " << err << " > target " << target
                << ", worst subinterval [" << segs[worst].a << ", " << segs[worst].b << "]";
            throw QuadratureError(msg.str(), segs[worst].a, segs[worst].b);
        }
        const Segment w = segs[worst];
        const double mid = 0.5 * (w.a + w.b);
        segs[worst] = kronrod(f, w.a, mid);
        segs.insert(segs.begin() + static_cast<std::ptrdiff_t>(worst) + 1, kronrod(f, mid, w.b));
    }
}

}  // namespace modalctl
