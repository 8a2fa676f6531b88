#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tcentroid/parallel.hpp"

// Numerical sweeps over the inequalities behind the centroid-shift result.
// A sweep never throws on a failed check: failures are collected into the
// report. Every check is phrased as a strict inequality lhs > rhs with
// margin = lhs - rhs (tolerance checks put the tolerance on the left).

namespace tcentroid::verification {

/// Inclusive grid min, min + step, ..., up to max.
struct Range {
    double min = 0.0;
    double max = 0.0;
    double step = 1.0;

    std::size_t count() const;
    double at(std::size_t i) const;
};

enum class SweepMode { grid, random };

// Axis meaning depends on the sweep:
//   monotonicity, derivative, oracle: l_range = l_hat, u_range = u_hat, h_range = shift
//                                     (only u_hat > l_hat is visited)
//   omega, bounds (2-D forms):        l_range = x1, u_range = x2 (full product)
//   bounds (1-D forms):               l_range = x
// Random mode draws n_random points uniformly from the same boxes; the
// step fields are ignored there.
struct SweepSpec {
    Range l_range;
    Range u_range;
    Range h_range;
    SweepMode mode = SweepMode::grid;
    std::size_t n_random = 0;
    std::uint64_t seed = 0;
};

void validate(const SweepSpec& spec);

struct CheckRecord {
    std::string check;
    double x1 = 0.0;
    double x2 = 0.0;
    double h = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
};

/// |margin| below this is reported as untestable rather than pass/fail.
inline constexpr double kUntestableMargin = 1e-280;

struct VerificationReport {
    std::size_t checks_run = 0;
    std::vector<CheckRecord> violations;  // margin <= -kUntestableMargin
    std::vector<CheckRecord> untestable;  // |margin| < kUntestableMargin
    std::vector<CheckRecord> tightest;    // smallest-margin point per check name
    double min_margin = 0.0;

    bool passed() const { return violations.empty(); }
};

// Default experiment definitions.
SweepSpec monotonicity_grid_spec();                 // l,u in [-5,5] step 0.5, h in [-3,3] step 0.1
SweepSpec theorem_random_spec(std::size_t n, std::uint64_t seed);  // l<u in [-5,5], 0<h1<h2<=3
SweepSpec omega_grid_spec();                        // [-8,8]^2 step 0.05
SweepSpec bounds_grid_spec();                       // x in [-8,8] step 0.01; x2 step 0.05
SweepSpec derivative_grid_spec();                   // l in [-4,3], u in (l,4], h in [-2,2]

/// Psi(h2) > Psi(h1) for adjacent h1 < h2, and sign(delta) == sign(shift).
/// Grid mode compares neighbours on h_range; random mode draws (l, u, h1, h2).
VerificationReport verify_monotonicity(const SweepSpec& spec, Execution exec = Execution::serial);

/// Omega(x1, x2) > 0.
VerificationReport verify_omega_positive(const SweepSpec& spec,
                                         Execution exec = Execution::serial);

/// The Mills-ratio chain: the scaled-erfc lower bound, both ratio bounds, their
/// rearranged forms, and the summed two-variable form.
VerificationReport verify_bounds(const SweepSpec& spec, Execution exec = Execution::serial);

/// Psi' > 0, Psi' against central differences (eps 1e-5, rel. err < 1e-6
/// where |Psi'| > 1e-8), and the Omega form against the quotient-rule form
/// (agreement 1e-10 relative to max(1, |Psi'|)).
VerificationReport verify_derivative(const SweepSpec& spec, Execution exec = Execution::serial);

/// Closed form against the quadrature oracle, |diff| <= 1e-9 max(1, |value|),
/// on the standardized grid of `spec` plus spec.n_random random (mu, sigma)
/// rescalings of grid points.
VerificationReport verify_oracle_equivalence(const SweepSpec& spec,
                                             Execution exec = Execution::serial);

/// Translation and scale equivariance of centroid_exterior to 1e-12
/// (relative to max(1, |value|)) on spec.n_random random configurations.
VerificationReport verify_equivariance(const SweepSpec& spec, Execution exec = Execution::serial);

/// Combines reports (checks summed, records merged and re-sorted).
VerificationReport combine(const std::vector<VerificationReport>& reports);

/// CSV with header check,x1,x2,h,lhs,rhs,margin. Violations use the bare
/// check name; untestable points and per-check tightest points are suffixed
/// "/untestable" and "/min_margin".
void write_report_csv(std::ostream& out, const VerificationReport& report);

}  // namespace tcentroid::verification
