#pragma once

#include "tcentroid/centroid.hpp"

// Independent numerical route to the exterior centroid: adaptive
// Gauss-Kronrod integration of the defining integrals. Shares nothing with
// the closed form beyond std_pdf.

namespace tcentroid::quadrature {

struct QuadratureConfig {
    double abs_tol = 1e-13;
    double rel_tol = 1e-12;
    /// Each tail is integrated out to at least this many sigmas past both the
    /// shifted mean and its own boundary; the rest is covered by an analytic bound.
    double tail_cutoff_sigmas = 12.0;
    /// Bisections allowed beyond the initial one-sigma panels.
    int max_subdivisions = 60;
};

void validate(const QuadratureConfig& cfg);

struct IntegralEstimate {
    double value = 0.0;
    double error = 0.0;            // sum of |K15 - G7| over panels
    double remainder_bound = 0.0;  // certified bound on the truncated tails
    int subdivisions = 0;
};

/// Support mass of the shifted law: integral over S of g(x) dx.
IntegralEstimate exterior_mass(const GaussianParams& params, const ExcludedInterval& hole,
                               double shift, const QuadratureConfig& cfg = {});

/// integral over S of x g(x) dx, integrated directly (no antiderivative).
IntegralEstimate exterior_first_moment(const GaussianParams& params,
                                       const ExcludedInterval& hole, double shift,
                                       const QuadratureConfig& cfg = {});

/// Oracle declines below this support mass.
inline constexpr double kMinOracleMass = 1e-290;

/// Ratio of the two integrals. Tolerances are tightened relative to the
/// support mass so the ratio keeps rel_tol accuracy on small supports.
CentroidResult centroid_quadrature(const GaussianParams& params, const ExcludedInterval& hole,
                                   double shift, const QuadratureConfig& cfg = {});

}  // namespace tcentroid::quadrature
