#include "tcentroid/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tcentroid/errors.hpp"
#include "tcentroid/philox.hpp"
#include "tcentroid/special_functions.hpp"
#include "tcentroid/quadrature.hpp"

namespace tcentroid::sampler {

namespace sf = special;

namespace {

// A forced rejection run below this mass would need ~1e6 draws per sample.
constexpr double kRejectionFloorMass = 1e-6;

// Substream tags keep the two strategies' counters disjoint.
constexpr std::uint32_t kRejectionTag = 0;
constexpr std::uint32_t kTailTag = 1;

struct Law {
    double center;  // mu + shift
    double sigma;
    double lower;
    double upper;
    double log_left;  // log Phi((lower - center) / sigma)
    double log_right; // log Q((upper - center) / sigma)
    double log_mass;
};

Law make_law(const GaussianParams& params, const ExcludedInterval& hole, double shift) {
    validate(params);
    validate(hole);
    detail::require_finite(shift, "shift");
    Law law{};
    law.center = params.mu + shift;
    law.sigma = params.sigma;
    law.lower = hole.lower;
    law.upper = hole.upper;
    law.log_left = sf::log_std_cdf((hole.lower - law.center) / params.sigma);
    law.log_right = sf::log_std_tail((hole.upper - law.center) / params.sigma);
    const double top = std::max(law.log_left, law.log_right);
    law.log_mass = top + std::log(std::exp(law.log_left - top) + std::exp(law.log_right - top));
    if (law.log_mass < std::log(quadrature::kMinOracleMass)) {
        throw DeepTruncationError("support mass below 1e-290; sampling is not possible");
    }
    return law;
}

bool in_support(const Law& law, double v) { return v <= law.lower || v >= law.upper; }

// Returns the accepted value and adds the candidates examined to `tried`.
double draw_rejection(const Law& law, const rng::Philox4x32::Key& key, std::uint64_t index,
                      std::uint64_t& tried) {
    for (std::uint32_t attempt = 0;; ++attempt) {
        const auto u = rng::uniforms(
            rng::Philox4x32::generate(rng::counter_for(index, attempt, kRejectionTag), key));
        // Box-Muller; each block yields two candidates.
        const double radius = std::sqrt(-2.0 * std::log(u.first));
        const double angle = 2.0 * std::numbers::pi * u.second;
        const double v1 = law.center + law.sigma * (radius * std::cos(angle));
        ++tried;
        if (in_support(law, v1)) {
            return v1;
        }
        const double v2 = law.center + law.sigma * (radius * std::sin(angle));
        ++tried;
        if (in_support(law, v2)) {
            return v2;
        }
    }
}

double draw_tail(const Law& law, const rng::Philox4x32::Key& key, std::uint64_t index) {
    const auto u = rng::uniforms(rng::Philox4x32::generate(rng::counter_for(index, 0, kTailTag), key));
    const double left_share = std::exp(law.log_left - law.log_mass);
    if (u.first < left_share) {
        // Phi(x) = u Phi(a)  <=>  Q(-x) = u Phi(a)
        const double x = -inverse_std_tail_from_log(std::log(u.second) + law.log_left);
        return std::min(law.center + law.sigma * x, law.lower);
    }
    const double x = inverse_std_tail_from_log(std::log(u.second) + law.log_right);
    return std::max(law.center + law.sigma * x, law.upper);
}

}  // namespace

std::string_view to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::rejection: return "rejection";
        case Strategy::tail_mixture: return "tail_mixture";
    }
    return "unknown";
}

double inverse_std_tail_from_log(double log_p) {
    detail::require_finite(log_p, "log probability");
    if (log_p > -std::numbers::ln2) {
        throw ParameterError("inverse tail needs p <= 1/2");
    }
    double lo = 0.0;
    double hi = 1.0;
    while (sf::log_std_tail(hi) > log_p) {
        lo = hi;
        hi *= 2.0;
    }
    double y = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double log_q = sf::log_std_tail(y);
        const double gap = log_q - log_p;
        if (gap == 0.0) {
            return y;
        }
        if (gap > 0.0) {
            lo = y;
        } else {
            hi = y;
        }
        // d/dy log Q(y) = -f(y) / Q(y)
        const double slope = -std::exp(sf::log_std_pdf(y) - log_q);
        double next = y - gap / slope;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::fabs(next - y) <= 1e-14 * std::max(1.0, std::fabs(y))) {
            return next;
        }
        y = next;
    }
    return y;
}

SampleBatch sample_exterior(const GaussianParams& params, const ExcludedInterval& hole,
                            double shift, std::size_t n, std::uint64_t seed, Execution exec) {
    const Law law = make_law(params, hole, shift);
    const Strategy strategy =
        std::exp(law.log_mass) >= kRejectionMinMass ? Strategy::rejection : Strategy::tail_mixture;
    return sample_exterior(params, hole, shift, n, seed, strategy, exec);
}

SampleBatch sample_exterior(const GaussianParams& params, const ExcludedInterval& hole,
                            double shift, std::size_t n, std::uint64_t seed, Strategy strategy,
                            Execution exec) {
    if (n < 1) {
        throw ParameterError("sample count must be >= 1");
    }
    const Law law = make_law(params, hole, shift);
    if (strategy == Strategy::rejection && std::exp(law.log_mass) < kRejectionFloorMass) {
        throw ParameterError("rejection sampling needs support mass >= 1e-6");
    }
    const auto key = rng::key_from_seed(seed);

    SampleBatch batch;
    batch.seed = seed;
    batch.strategy = strategy;
    batch.values.resize(n);
    double* out = batch.values.data();
    const auto count = static_cast<std::int64_t>(n);
    std::uint64_t tried = 0;

    if (strategy == Strategy::rejection) {
        if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static) reduction(+ : tried) num_threads(thread_limit())
            for (std::int64_t i = 0; i < count; ++i) {
                out[i] = draw_rejection(law, key, static_cast<std::uint64_t>(i), tried);
            }
        } else {
            for (std::int64_t i = 0; i < count; ++i) {
                out[i] = draw_rejection(law, key, static_cast<std::uint64_t>(i), tried);
            }
        }
        batch.acceptance_rate = static_cast<double>(n) / static_cast<double>(tried);
    } else {
        if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static) num_threads(thread_limit())
            for (std::int64_t i = 0; i < count; ++i) {
                out[i] = draw_tail(law, key, static_cast<std::uint64_t>(i));
            }
        } else {
            for (std::int64_t i = 0; i < count; ++i) {
                out[i] = draw_tail(law, key, static_cast<std::uint64_t>(i));
            }
        }
        batch.acceptance_rate = 1.0;
    }
    return batch;
}

MonteCarloEstimate monte_carlo_centroid(std::span<const double> values) {
    if (values.size() < 2) {
        throw InsufficientSamplesError("Monte Carlo estimate needs at least 2 samples");
    }
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    const double mean = sum / n;
    double squares = 0.0;
    for (double v : values) {
        const double d = v - mean;
        squares += d * d;
    }
    const double sample_std = std::sqrt(squares / (n - 1.0));
    return {mean, sample_std / std::sqrt(n), values.size()};
}

MonteCarloEstimate monte_carlo_centroid(const SampleBatch& batch) {
    return monte_carlo_centroid(std::span<const double>(batch.values));
}

}  // namespace tcentroid::sampler
