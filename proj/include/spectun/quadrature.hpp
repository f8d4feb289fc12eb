#pragma once

#include <functional>

namespace spectun {

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b].
///
/// Recursively bisects until the local K15-G7 discrepancy is below
/// max(abs_tol_local, rel_tol * |I|). Throws ConstructionError if the
/// recursion depth cap is hit before the tolerance is met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, double rel_tol = 1e-12);

/// Fixed 8-point Gauss-Legendre rule on [a, b]; no error control.
/// Intended for panels where the integrand is known smooth and narrow.
double gauss8(const std::function<double(double)>& f, double a, double b);

}  // namespace spectun
