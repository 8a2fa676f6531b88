#pragma once

// Standard normal density, distribution and tail functions, evaluated so that
// tail quantities keep full relative precision far from the mean.
//
// All functions reject NaN and infinite arguments with DomainError.

namespace tcentroid::special {

/// Complementary error function. Relative error below 1e-15 wherever the
/// result is a normal double.
double erfc(double x);

/// Scaled complementary error function exp(x^2) * erfc(x), for x >= 0
/// without overflow or underflow of the intermediate factors.
double erfcx(double x);

/// (1/sqrt(2 pi)) exp(-x^2/2). Bitwise symmetric in x.
double std_pdf(double x);

/// Phi(x) = 0.5 erfc(-x/sqrt 2).
double std_cdf(double x);

/// Q(x) = 1 - Phi(x) = 0.5 erfc(x/sqrt 2), computed without cancellation.
double std_tail(double x);

// Log-space variants. These stay finite where the plain functions underflow
// (|x| beyond ~38) and are used by the deep-truncation branch of the centroid
// and by the tail sampler.
double log_std_pdf(double x);
double log_std_tail(double x);
double log_std_cdf(double x);

/// Lower bound on Q(x) / (2 f(x)): 1 / (x + sqrt(x^2 + 4)).
double mills_lower_bound_tail(double x);

/// Lower bound on Phi(x) / (2 f(x)): 1 / (-x + sqrt(x^2 + 4)).
/// Equals mills_lower_bound_tail(-x).
double mills_lower_bound_cdf(double x);

}  // namespace tcentroid::special
