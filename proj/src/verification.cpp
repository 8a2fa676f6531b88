#include "tcentroid/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "sweep_runner.hpp"
#include "tcentroid/centroid.hpp"
#include "tcentroid/errors.hpp"
#include "tcentroid/format.hpp"
#include "tcentroid/philox.hpp"
#include "tcentroid/quadrature.hpp"
#include "tcentroid/special_functions.hpp"

namespace tcentroid::verification {

namespace sf = special;
using detail::Accumulator;
using detail::run_sweep;

namespace {

constexpr double kFiniteDifferenceStep = 1e-5;
constexpr double kFiniteDifferenceTol = 1e-6;
constexpr double kFiniteDifferenceFloor = 1e-8;
constexpr double kAnalyticFormsTol = 1e-10;
constexpr double kOracleTol = 1e-9;
constexpr double kEquivarianceTol = 1e-12;

// Philox substreams per sweep, so sweeps sharing a seed stay independent.
constexpr std::uint32_t kTheoremTag = 0x100;
constexpr std::uint32_t kDerivativeTag = 0x200;
constexpr std::uint32_t kOracleTag = 0x300;
constexpr std::uint32_t kEquivarianceTag = 0x400;

// Uniform draws for random point i, block k of that point.
class PointDraws {
public:
    PointDraws(std::uint64_t seed, std::uint32_t tag, std::size_t index)
        : key_(rng::key_from_seed(seed)), tag_(tag), index_(index) {}

    double uniform() {
        if (!pending_) {
            const auto pair = rng::uniforms(
                rng::Philox4x32::generate(rng::counter_for(index_, block_++, tag_), key_));
            spare_ = pair.second;
            pending_ = true;
            return pair.first;
        }
        pending_ = false;
        return spare_;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

private:
    rng::Philox4x32::Key key_;
    std::uint32_t tag_;
    std::uint64_t index_;
    std::uint32_t block_ = 0;
    double spare_ = 0.0;
    bool pending_ = false;
};

struct Pair {
    double l;
    double u;
};

// (l, u) grid points with u > l.
std::vector<Pair> ordered_pairs(const SweepSpec& spec) {
    std::vector<Pair> out;
    for (std::size_t i = 0; i < spec.l_range.count(); ++i) {
        for (std::size_t j = 0; j < spec.u_range.count(); ++j) {
            const double l = spec.l_range.at(i);
            const double u = spec.u_range.at(j);
            if (u > l) {
                out.push_back({l, u});
            }
        }
    }
    return out;
}

std::vector<double> grid_values(const Range& r) {
    std::vector<double> out(r.count());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = r.at(i);
    }
    return out;
}

// Draws l < u from the spec boxes, rejecting unordered pairs.
Pair random_pair(const SweepSpec& spec, PointDraws& draws) {
    for (;;) {
        const double l = draws.uniform(spec.l_range.min, spec.l_range.max);
        const double u = draws.uniform(spec.u_range.min, spec.u_range.max);
        if (u > l) {
            return {l, u};
        }
    }
}

struct Triple {
    double l;
    double u;
    double h;
};

// Standardized configurations of a grid-or-random spec.
std::vector<Triple> standardized_configs(const SweepSpec& spec, std::uint32_t tag) {
    std::vector<Triple> out;
    if (spec.mode == SweepMode::grid) {
        const auto pairs = ordered_pairs(spec);
        const auto hs = grid_values(spec.h_range);
        out.reserve(pairs.size() * hs.size());
        for (const Pair& p : pairs) {
            for (double h : hs) {
                out.push_back({p.l, p.u, h});
            }
        }
    } else {
        out.reserve(spec.n_random);
        for (std::size_t i = 0; i < spec.n_random; ++i) {
            PointDraws draws(spec.seed, tag, i);
            const Pair p = random_pair(spec, draws);
            out.push_back({p.l, p.u, draws.uniform(spec.h_range.min, spec.h_range.max)});
        }
    }
    return out;
}

void record_delta_sign(Accumulator& acc, double l, double u, double h) {
    if (h == 0.0) {
        return;
    }
    const ShiftComparison cmp = shift_comparison({0.0, 1.0}, {l, u}, h);
    if (h > 0.0) {
        acc.record("delta_sign", l, u, h, cmp.delta, 0.0);
    } else {
        acc.record("delta_sign", l, u, h, 0.0, cmp.delta);
    }
}

}  // namespace

std::size_t Range::count() const {
    const double span = (max - min) / step;
    return static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
}

double Range::at(std::size_t i) const {
    const double span = (max - min) / step;
    const double whole = std::round(span);
    if (std::fabs(span - whole) < 1e-9 && whole > 0.0) {
        // Lerp keeps grid points such as 0 exact when step divides the span.
        return min + (max - min) * static_cast<double>(i) / whole;
    }
    return min + step * static_cast<double>(i);
}

void validate(const SweepSpec& spec) {
    for (const Range* r : {&spec.l_range, &spec.u_range, &spec.h_range}) {
        if (!std::isfinite(r->min) || !std::isfinite(r->max) || !std::isfinite(r->step)) {
            throw DomainError("sweep ranges must be finite");
        }
        if (!(r->min < r->max)) {
            throw ParameterError("sweep range needs min < max");
        }
        if (spec.mode == SweepMode::grid && !(r->step > 0.0)) {
            throw ParameterError("sweep range needs step > 0");
        }
    }
    if (spec.mode == SweepMode::random && spec.n_random == 0) {
        throw ParameterError("random sweep needs n_random > 0");
    }
    if (spec.mode == SweepMode::random && !(spec.u_range.max > spec.l_range.min)) {
        throw ParameterError("random sweep boxes admit no pair with u > l");
    }
}

SweepSpec monotonicity_grid_spec() {
    return {{-5.0, 5.0, 0.5}, {-5.0, 5.0, 0.5}, {-3.0, 3.0, 0.1}, SweepMode::grid, 0, 0};
}

SweepSpec theorem_random_spec(std::size_t n, std::uint64_t seed) {
    return {{-5.0, 5.0, 1.0}, {-5.0, 5.0, 1.0}, {0.0, 3.0, 1.0}, SweepMode::random, n, seed};
}

SweepSpec omega_grid_spec() {
    return {{-8.0, 8.0, 0.05}, {-8.0, 8.0, 0.05}, {0.0, 1.0, 1.0}, SweepMode::grid, 0, 0};
}

SweepSpec bounds_grid_spec() {
    return {{-8.0, 8.0, 0.01}, {-8.0, 8.0, 0.05}, {0.0, 1.0, 1.0}, SweepMode::grid, 0, 0};
}

SweepSpec derivative_grid_spec() {
    // 135 ordered (l, u) pairs x 15 shifts = 2025 configurations.
    return {{-4.0, 3.0, 0.5}, {-4.0, 4.0, 0.5}, {-2.0, 2.0, 2.0 / 7.0}, SweepMode::grid, 0, 0};
}

VerificationReport verify_monotonicity(const SweepSpec& spec, Execution exec) {
    validate(spec);
    if (spec.mode == SweepMode::grid) {
        const auto pairs = ordered_pairs(spec);
        auto hs = grid_values(spec.h_range);
        std::sort(hs.begin(), hs.end());
        hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
        return run_sweep(pairs.size(), exec, [&](std::size_t i, Accumulator& acc) {
            const Pair p = pairs[i];
            double previous = psi(hs[0], p.l, p.u);
            record_delta_sign(acc, p.l, p.u, hs[0]);
            for (std::size_t k = 1; k < hs.size(); ++k) {
                const double current = psi(hs[k], p.l, p.u);
                acc.record("psi_increasing", p.l, p.u, hs[k], current, previous);
                record_delta_sign(acc, p.l, p.u, hs[k]);
                previous = current;
            }
        });
    }
    return run_sweep(spec.n_random, exec, [&](std::size_t i, Accumulator& acc) {
        PointDraws draws(spec.seed, kTheoremTag, i);
        const Pair p = random_pair(spec, draws);
        double h1 = draws.uniform(spec.h_range.min, spec.h_range.max);
        double h2 = draws.uniform(spec.h_range.min, spec.h_range.max);
        if (h1 > h2) {
            std::swap(h1, h2);
        }
        if (h1 == h2) {
            return;
        }
        acc.record("psi_increasing", p.l, p.u, h2, psi(h2, p.l, p.u), psi(h1, p.l, p.u));
        record_delta_sign(acc, p.l, p.u, h1);
        record_delta_sign(acc, p.l, p.u, h2);
    });
}

VerificationReport verify_omega_positive(const SweepSpec& spec, Execution exec) {
    validate(spec);
    const auto xs1 = grid_values(spec.l_range);
    const auto xs2 = grid_values(spec.u_range);
    return run_sweep(xs1.size() * xs2.size(), exec, [&](std::size_t i, Accumulator& acc) {
        const double x1 = xs1[i / xs2.size()];
        const double x2 = xs2[i % xs2.size()];
        acc.record("omega_positive", x1, x2, 0.0, omega(x1, x2), 0.0);
    });
}

namespace {

struct AxisPoint {
    double x;
    double pdf;
    double cdf;
    double tail;
    double root;  // sqrt(x^2 + 4)
};

std::vector<AxisPoint> axis_points(const Range& r) {
    std::vector<AxisPoint> out(r.count());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double x = r.at(i);
        out[i] = {x, sf::std_pdf(x), sf::std_cdf(x), sf::std_tail(x), std::hypot(x, 2.0)};
    }
    return out;
}

// exp(x^2) * integral_x^inf exp(-t^2) dt = (sqrt(pi)/2) erfcx(x)
double erfcx_bound_lhs(double x) {
    const double half_root_pi = 0.5 * std::sqrt(std::numbers::pi);
    if (x >= 0.0) {
        return half_root_pi * sf::erfcx(x);
    }
    return half_root_pi * std::exp(x * x) * sf::erfc(x);
}

// 1 / (x + sqrt(x^2 + 2)), rewritten for x < 0
double erfcx_bound_rhs(double x) {
    const double root = std::hypot(x, std::numbers::sqrt2);
    return x < 0.0 ? (root - x) / 2.0 : 1.0 / (x + root);
}

}  // namespace

VerificationReport verify_bounds(const SweepSpec& spec, Execution exec) {
    validate(spec);
    const auto axis1 = axis_points(spec.l_range);
    const auto axis2 = axis_points(spec.u_range);
    const std::size_t n1 = axis1.size();
    return run_sweep(n1 + n1 * axis2.size(), exec, [&](std::size_t i, Accumulator& acc) {
        if (i < n1) {
            const AxisPoint& p = axis1[i];
            acc.record("erfcx_bound", p.x, 0.0, 0.0, erfcx_bound_lhs(p.x), erfcx_bound_rhs(p.x));
            acc.record("tail_mills", p.x, 0.0, 0.0, p.tail / (2.0 * p.pdf),
                       sf::mills_lower_bound_tail(p.x));
            acc.record("cdf_mills", p.x, 0.0, 0.0, p.cdf / (2.0 * p.pdf),
                       sf::mills_lower_bound_cdf(p.x));
            acc.record("tail_ineq", p.x, 0.0, 0.0, 2.0 * p.tail + p.x * p.pdf, p.root * p.pdf);
            acc.record("cdf_ineq", p.x, 0.0, 0.0, 2.0 * p.cdf - p.x * p.pdf, p.root * p.pdf);
            return;
        }
        const std::size_t k = i - n1;
        const AxisPoint& a = axis1[k / axis2.size()];
        const AxisPoint& b = axis2[k % axis2.size()];
        const double lhs = 2.0 * (a.tail + b.cdf) + (a.x * a.pdf - b.x * b.pdf);
        const double rhs = a.root * a.pdf + b.root * b.pdf;
        acc.record("summed_ineq", a.x, b.x, 0.0, lhs, rhs);
    });
}

VerificationReport verify_derivative(const SweepSpec& spec, Execution exec) {
    validate(spec);
    const auto configs = standardized_configs(spec, kDerivativeTag);
    return run_sweep(configs.size(), exec, [&](std::size_t i, Accumulator& acc) {
        const auto [l, u, h] = configs[i];
        const double analytic = psi_derivative(h, l, u);
        acc.record("derivative_positive", l, u, h, analytic, 0.0);

        const double quotient = psi_derivative_quotient_rule(h, l, u);
        acc.record("analytic_forms", l, u, h, kAnalyticFormsTol * std::max(1.0, std::fabs(analytic)),
                   std::fabs(analytic - quotient));

        if (std::fabs(analytic) > kFiniteDifferenceFloor) {
            const double eps = kFiniteDifferenceStep;
            const double central = (psi(h + eps, l, u) - psi(h - eps, l, u)) / (2.0 * eps);
            acc.record("finite_difference", l, u, h, kFiniteDifferenceTol,
                       std::fabs(central - analytic) / std::fabs(analytic));
        }
    });
}

VerificationReport verify_oracle_equivalence(const SweepSpec& spec, Execution exec) {
    validate(spec);
    SweepSpec grid = spec;
    grid.mode = SweepMode::grid;
    const auto configs = standardized_configs(grid, kOracleTag);
    const std::size_t rescaled = spec.n_random;
    return run_sweep(configs.size() + rescaled, exec, [&](std::size_t i, Accumulator& acc) {
        GaussianParams params{0.0, 1.0};
        Triple t{};
        if (i < configs.size()) {
            t = configs[i];
        } else {
            PointDraws draws(spec.seed, kOracleTag, i);
            const auto pick = static_cast<std::size_t>(draws.uniform() * static_cast<double>(configs.size()));
            t = configs[std::min(pick, configs.size() - 1)];
            params.mu = draws.uniform(-10.0, 10.0);
            params.sigma = draws.log_uniform(0.1, 10.0);
        }
        const ExcludedInterval hole{params.mu + params.sigma * t.l, params.mu + params.sigma * t.u};
        const double shift = params.sigma * t.h;
        const double closed = centroid_exterior(params, hole, shift).value;
        const double oracle = quadrature::centroid_quadrature(params, hole, shift).value;
        acc.record("oracle_equivalence", t.l, t.u, t.h, kOracleTol * std::max(1.0, std::fabs(closed)),
                   std::fabs(closed - oracle));
    });
}

VerificationReport verify_equivariance(const SweepSpec& spec, Execution exec) {
    validate(spec);
    return run_sweep(spec.n_random, exec, [&](std::size_t i, Accumulator& acc) {
        PointDraws draws(spec.seed, kEquivarianceTag, i);
        const Pair p = random_pair(spec, draws);
        const double h = draws.uniform(spec.h_range.min, spec.h_range.max);
        const double mu = draws.uniform(-10.0, 10.0);
        const double sigma = draws.log_uniform(0.1, 10.0);
        const double offset = draws.uniform(-10.0, 10.0);
        const double scale = draws.log_uniform(0.1, 10.0);

        const ExcludedInterval hole{mu + sigma * p.l, mu + sigma * p.u};
        const double base = centroid_exterior({mu, sigma}, hole, sigma * h).value;
        const double moved = centroid_exterior({mu + offset, sigma},
                                               {hole.lower + offset, hole.upper + offset}, sigma * h)
                                 .value;
        acc.record("translation", p.l, p.u, h, kEquivarianceTol * std::max(1.0, std::fabs(moved)),
                   std::fabs(moved - (base + offset)));

        const double unit = centroid_exterior({0.0, 1.0}, {p.l, p.u}, h).value;
        const double scaled =
            centroid_exterior({0.0, scale}, {scale * p.l, scale * p.u}, scale * h).value;
        acc.record("scale", p.l, p.u, h, kEquivarianceTol * std::max(1.0, std::fabs(scaled)),
                   std::fabs(scaled - scale * unit));
    });
}

VerificationReport combine(const std::vector<VerificationReport>& reports) {
    VerificationReport out;
    out.min_margin = std::numeric_limits<double>::infinity();
    for (const VerificationReport& r : reports) {
        out.checks_run += r.checks_run;
        out.violations.insert(out.violations.end(), r.violations.begin(), r.violations.end());
        out.untestable.insert(out.untestable.end(), r.untestable.begin(), r.untestable.end());
        out.tightest.insert(out.tightest.end(), r.tightest.begin(), r.tightest.end());
        out.min_margin = std::min(out.min_margin, r.min_margin);
    }
    std::sort(out.violations.begin(), out.violations.end(), detail::canonical_less);
    std::sort(out.untestable.begin(), out.untestable.end(), detail::canonical_less);
    std::sort(out.tightest.begin(), out.tightest.end(), detail::canonical_less);
    return out;
}

void write_report_csv(std::ostream& out, const VerificationReport& report) {
    const auto row = [&](const CheckRecord& r, const char* suffix) {
        out << r.check << suffix << ',' << format_double(r.x1) << ',' << format_double(r.x2) << ','
            << format_double(r.h) << ',' << format_double(r.lhs) << ',' << format_double(r.rhs)
            << ',' << format_double(r.margin) << '\n';
    };
    out << "check,x1,x2,h,lhs,rhs,margin\n";
    for (const CheckRecord& r : report.violations) {
        row(r, "");
    }
    for (const CheckRecord& r : report.untestable) {
        row(r, "/untestable");
    }
    for (const CheckRecord& r : report.tightest) {
        row(r, "/min_margin");
    }
}

}  // namespace tcentroid::verification
