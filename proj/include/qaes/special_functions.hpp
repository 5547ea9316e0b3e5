#pragma once

namespace qaes::special {

// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
double igam(double a, double x);

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
//
// For x < 1 or x < a the power series for P is summed and Q = 1 - P;
// otherwise Q is evaluated directly from its continued fraction (modified
// Lentz). Both stop at a relative term size of 1e-15, giving about 1e-13
// relative accuracy for the (a, x) ranges used by the randomness tests.
double igamc(double a, double x);

// Standard normal cumulative distribution function.
double normal_cdf(double x);

}  // namespace qaes::special
