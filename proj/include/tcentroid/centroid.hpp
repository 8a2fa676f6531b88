#pragma once

#include <string_view>
#include <vector>

namespace tcentroid {

/// Location and scale of the untruncated Gaussian N(mu, sigma^2).
/// sigma is the standard deviation, not the variance.
struct GaussianParams {
    double mu = 0.0;
    double sigma = 1.0;
};

/// The hole (lower, upper). Conditioning support is its complement
/// S = (-inf, lower] U [upper, inf). Both ends must be finite.
struct ExcludedInterval {
    double lower = -1.0;
    double upper = 1.0;
};

/// Unitless problem after x = sigma t + mu.
struct StandardizedProblem {
    double l_hat = 0.0;
    double u_hat = 0.0;
    double h_hat = 0.0;
};

enum class Method { closed_form, quadrature, monte_carlo };

enum class Warning {
    ill_conditioned,  // support mass below 1e-12
    deep_truncation,  // support mass below 1e-300; log-space branch taken
    mass_underflow,   // support mass not representable as a normal double
};

std::string_view to_string(Method method);
std::string_view to_string(Warning warning);

struct CentroidResult {
    double value = 0.0;
    Method method = Method::closed_form;
    double support_mass = 0.0;
    std::vector<Warning> warnings;

    bool has_warning(Warning w) const;
};

struct ShiftComparison {
    CentroidResult base;
    CentroidResult shifted;
    double shift = 0.0;
    double delta = 0.0;
};

void validate(const GaussianParams& params);
void validate(const ExcludedInterval& hole);

// Thresholds on the support mass Q(u_hat - h) + Phi(l_hat - h).
inline constexpr double kIllConditionedMass = 1e-12;
inline constexpr double kDeepTruncationMass = 1e-300;

StandardizedProblem standardize(const GaussianParams& params, const ExcludedInterval& hole,
                                double shift);

/// Psi with its diagnostics.
struct PsiEvaluation {
    double value = 0.0;
    double support_mass = 0.0;
    double log_support_mass = 0.0;
    std::vector<Warning> warnings;
};

// Centroid of the standard normal shifted by h, on R \ (l_hat, u_hat):
//   Psi(h) = h + (f(u_hat - h) - f(l_hat - h)) / (Q(u_hat - h) + Phi(l_hat - h)).
// Strictly increasing in h.
PsiEvaluation evaluate_psi(double h, double l_hat, double u_hat);
double psi(double h, double l_hat, double u_hat);

// Omega(x1, x2) = (x1 f(x1) - x2 f(x2)) (Q(x1) + Phi(x2))
//               + (Q(x1) + Phi(x2))^2 - (f(x1) - f(x2))^2.
// Positive on all of R^2.
double omega(double x1, double x2);

/// Psi'(h) = Omega(u_hat - h, l_hat - h) / (Q(u_hat - h) + Phi(l_hat - h))^2.
double psi_derivative(double h, double l_hat, double u_hat);

/// Psi'(h) through the quotient rule,
///   1 + [((b f(b) - a f(a)) D - (f(b) - f(a))^2] / D^2,  a = l_hat - h, b = u_hat - h,
/// kept as a second route for cross-checking psi_derivative.
double psi_derivative_quotient_rule(double h, double l_hat, double u_hat);

/// Conditional expectation of N(mu + shift, sigma^2) given X outside the hole.
CentroidResult centroid_exterior(const GaussianParams& params, const ExcludedInterval& hole,
                                 double shift);

/// Centroids at shift 0 and at `shift`. delta has the sign of shift.
ShiftComparison shift_comparison(const GaussianParams& params, const ExcludedInterval& hole,
                                 double shift);

}  // namespace tcentroid
