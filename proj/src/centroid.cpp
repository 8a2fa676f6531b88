#include "tcentroid/centroid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tcentroid/errors.hpp"
#include "tcentroid/format.hpp"
#include "tcentroid/special_functions.hpp"

namespace tcentroid {

namespace sf = special;

namespace {

// Below this support mass the derivative is evaluated with every term already
// divided by D, since D^2 would leave the normal range.
constexpr double kScaledDerivativeMass = 1e-150;

void check_standardized(double h, double l_hat, double u_hat) {
    detail::require_finite(h, "shift");
    detail::require_finite(l_hat, "standardized lower bound");
    detail::require_finite(u_hat, "standardized upper bound");
    if (!(u_hat > l_hat)) {
        throw IntervalError("excluded interval needs upper > lower");
    }
}

// Terms of Psi and Psi' divided by the support mass D = Q(b) + Phi(a),
// formed in log space so that nothing underflows when D does.
struct ScaledTerms {
    double pdf_upper = 0.0;  // f(b) / D
    double pdf_lower = 0.0;  // f(a) / D
    double log_mass = 0.0;
};

ScaledTerms scaled_terms(double a, double b) {
    const double log_q = sf::log_std_tail(b);
    const double log_p = sf::log_std_cdf(a);
    const double top = std::max(log_q, log_p);
    const double log_mass = top + std::log(std::exp(log_q - top) + std::exp(log_p - top));
    return {std::exp(sf::log_std_pdf(b) - log_mass), std::exp(sf::log_std_pdf(a) - log_mass),
            log_mass};
}

std::vector<Warning> mass_warnings(double mass) {
    std::vector<Warning> out;
    if (mass < kIllConditionedMass) {
        out.push_back(Warning::ill_conditioned);
    }
    if (mass < kDeepTruncationMass) {
        out.push_back(Warning::deep_truncation);
    }
    if (mass < std::numeric_limits<double>::min()) {
        out.push_back(Warning::mass_underflow);
    }
    return out;
}

}  // namespace

std::string_view to_string(Method method) {
    switch (method) {
        case Method::closed_form: return "closed_form";
        case Method::quadrature: return "quadrature";
        case Method::monte_carlo: return "monte_carlo";
    }
    return "unknown";
}

std::string_view to_string(Warning warning) {
    switch (warning) {
        case Warning::ill_conditioned: return "ill_conditioned";
        case Warning::deep_truncation: return "deep_truncation";
        case Warning::mass_underflow: return "mass_underflow";
    }
    return "unknown";
}

bool CentroidResult::has_warning(Warning w) const {
    return std::find(warnings.begin(), warnings.end(), w) != warnings.end();
}

void validate(const GaussianParams& params) {
    detail::require_finite(params.mu, "mu");
    detail::require_finite(params.sigma, "sigma");
    if (!(params.sigma > 0.0)) {
        throw ParameterError("sigma must be > 0 (got " + format_double(params.sigma) + ")");
    }
}

void validate(const ExcludedInterval& hole) {
    if (!std::isfinite(hole.lower) || !std::isfinite(hole.upper)) {
        throw IntervalError("excluded interval ends must be finite; one-sided truncation is not supported");
    }
    if (!(hole.upper > hole.lower)) {
        throw IntervalError("excluded interval needs upper > lower");
    }
}

StandardizedProblem standardize(const GaussianParams& params, const ExcludedInterval& hole,
                                double shift) {
    validate(params);
    validate(hole);
    detail::require_finite(shift, "shift");
    StandardizedProblem out{(hole.lower - params.mu) / params.sigma,
                            (hole.upper - params.mu) / params.sigma, shift / params.sigma};
    if (!std::isfinite(out.l_hat) || !std::isfinite(out.u_hat) || !std::isfinite(out.h_hat)) {
        throw ParameterError("standardized problem overflows; sigma too small for the given bounds");
    }
    if (!(out.u_hat > out.l_hat)) {
        throw IntervalError("excluded interval collapses after standardization");
    }
    return out;
}

PsiEvaluation evaluate_psi(double h, double l_hat, double u_hat) {
    check_standardized(h, l_hat, u_hat);
    const double a = l_hat - h;
    const double b = u_hat - h;
    const double mass = sf::std_tail(b) + sf::std_cdf(a);

    PsiEvaluation out;
    if (mass < kDeepTruncationMass) {
        const ScaledTerms t = scaled_terms(a, b);
        out.value = h + (t.pdf_upper - t.pdf_lower);
        out.log_support_mass = t.log_mass;
        out.support_mass = std::exp(t.log_mass);
    } else {
        out.value = h + (sf::std_pdf(b) - sf::std_pdf(a)) / mass;
        out.support_mass = mass;
        out.log_support_mass = std::log(mass);
    }
    out.warnings = mass_warnings(out.support_mass);
    return out;
}

double psi(double h, double l_hat, double u_hat) { return evaluate_psi(h, l_hat, u_hat).value; }

double omega(double x1, double x2) {
    detail::require_finite(x1, "omega x1");
    detail::require_finite(x2, "omega x2");
    const double f1 = sf::std_pdf(x1);
    const double f2 = sf::std_pdf(x2);
    const double mass = sf::std_tail(x1) + sf::std_cdf(x2);
    const double density_gap = f1 - f2;
    return (x1 * f1 - x2 * f2) * mass + mass * mass - density_gap * density_gap;
}

namespace {

// 1 + (b f(b) - a f(a))/D - ((f(b) - f(a))/D)^2, which is Omega(b, a)/D^2
// with each factor pre-divided.
double scaled_derivative(double a, double b) {
    const ScaledTerms t = scaled_terms(a, b);
    const double ratio = t.pdf_upper - t.pdf_lower;
    return 1.0 + (b * t.pdf_upper - a * t.pdf_lower) - ratio * ratio;
}

}  // namespace

double psi_derivative(double h, double l_hat, double u_hat) {
    check_standardized(h, l_hat, u_hat);
    const double a = l_hat - h;
    const double b = u_hat - h;
    const double mass = sf::std_tail(b) + sf::std_cdf(a);
    if (mass < kScaledDerivativeMass) {
        return scaled_derivative(a, b);
    }
    return omega(b, a) / (mass * mass);
}

double psi_derivative_quotient_rule(double h, double l_hat, double u_hat) {
    check_standardized(h, l_hat, u_hat);
    const double a = l_hat - h;
    const double b = u_hat - h;
    const double mass = sf::std_tail(b) + sf::std_cdf(a);
    if (mass < kScaledDerivativeMass) {
        return scaled_derivative(a, b);
    }
    const double fa = sf::std_pdf(a);
    const double fb = sf::std_pdf(b);
    const double gap = fb - fa;
    return 1.0 + ((b * fb - a * fa) * mass - gap * gap) / (mass * mass);
}

CentroidResult centroid_exterior(const GaussianParams& params, const ExcludedInterval& hole,
                                 double shift) {
    const StandardizedProblem p = standardize(params, hole, shift);
    PsiEvaluation ev = evaluate_psi(p.h_hat, p.l_hat, p.u_hat);
    CentroidResult out;
    out.value = params.mu + params.sigma * ev.value;
    out.method = Method::closed_form;
    out.support_mass = ev.support_mass;
    out.warnings = std::move(ev.warnings);
    return out;
}

ShiftComparison shift_comparison(const GaussianParams& params, const ExcludedInterval& hole,
                                 double shift) {
    ShiftComparison out;
    out.base = centroid_exterior(params, hole, 0.0);
    out.shifted = centroid_exterior(params, hole, shift);
    out.shift = shift;
    out.delta = out.shifted.value - out.base.value;
    return out;
}

}  // namespace tcentroid
