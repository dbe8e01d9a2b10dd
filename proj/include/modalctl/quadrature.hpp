#pragma once

#include <functional>
#include <vector>

#include "modalctl/types.hpp"

namespace modalctl {

struct GaussLegendreRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule via Newton iteration on P_n.
GaussLegendreRule gauss_legendre(int n);

struct AdaptiveOptions {
    double rel_tol = 1e-12;
    // Absolute floor; when <= 0 it defaults to rel_tol * 1e-2 * integral of |f|.
    double abs_tol = 0.0;
    int max_intervals = 4000;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of a complex integrand
/// over [a, b]. Throws QuadratureError naming the worst subinterval when the
/// interval budget runs out.
Complex integrate_adaptive(const std::function<Complex(double)>& f, double a, double b,
                           const AdaptiveOptions& opts = {});

}  // namespace modalctl
