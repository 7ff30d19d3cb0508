#pragma once

#include <functional>
#include <span>

namespace specop {

// Sums v by recursive halving. The summation tree depends only on v.size(),
// so results are bit-identical regardless of how the values were produced.
double pairwise_sum(std::span<const double> v);

// Adaptive Simpson quadrature on [a, b]. Recursion stops when the local
// Richardson error estimate drops below the local share of abs_tol, or at
// max_depth. The first min_depth levels subdivide unconditionally: an
// integrand whose halves mirror about the midpoint (or whose kinks sit on
// the coarse sample points) can zero out the top-level error estimate while
// both halves are wrong, and only forced refinement breaks that coincidence.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_depth = 48,
                        int min_depth = 6);

}  // namespace specop
