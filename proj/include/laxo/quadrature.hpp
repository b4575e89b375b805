#pragma once

#include <functional>

namespace laxo {

// Adaptive Simpson on [a,b] with absolute tolerance; depth is capped so a
// nasty integrand degrades accuracy instead of hanging.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-10, int max_depth = 48);

// Golden-section minimisation of f on [a,b]; returns the abscissa.
double golden_min(const std::function<double(double)>& f, double a, double b,
                  double tol = 1e-12, int max_iter = 200);

// Plain bisection for a sign change of `pred` (false at lo, true at hi).
// Returns the final bracket midpoint.
double bisect_flip(const std::function<bool(double)>& pred, double lo,
                   double hi, double tol, int max_iter = 200);

} // namespace laxo
