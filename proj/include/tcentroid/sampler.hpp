#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "tcentroid/centroid.hpp"
#include "tcentroid/parallel.hpp"

namespace tcentroid::sampler {

enum class Strategy {
    rejection,     // draw from the full law, discard points in the hole
    tail_mixture,  // pick a tail by its mass, then invert that tail's CDF
};

/// Below this support mass the sampler switches from rejection to the tail
/// mixture. Purely a speed trade-off: both paths sample the same law.
inline constexpr double kRejectionMinMass = 0.05;

struct SampleBatch {
    std::vector<double> values;
    std::uint64_t seed = 0;
    double acceptance_rate = 1.0;
    Strategy strategy = Strategy::rejection;
};

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

/// n i.i.d. draws from N(mu + shift, sigma^2) conditioned on the exterior of
/// the hole. Draw i is a pure function of (seed, i), so serial and parallel
/// execution give identical batches.
SampleBatch sample_exterior(const GaussianParams& params, const ExcludedInterval& hole,
                            double shift, std::size_t n, std::uint64_t seed,
                            Execution exec = Execution::serial);

// Same, with the strategy forced; used to test both paths on one law.
SampleBatch sample_exterior(const GaussianParams& params, const ExcludedInterval& hole,
                            double shift, std::size_t n, std::uint64_t seed, Strategy strategy,
                            Execution exec = Execution::serial);

/// Sample mean with standard error s / sqrt(n). Needs n >= 2.
MonteCarloEstimate monte_carlo_centroid(std::span<const double> values);
MonteCarloEstimate monte_carlo_centroid(const SampleBatch& batch);

/// y >= 0 with log Q(y) = log_p, for log_p <= log(1/2). Bisection-guarded
/// Newton on log Q, converged to 1e-14 relative.
double inverse_std_tail_from_log(double log_p);

std::string_view to_string(Strategy strategy);

}  // namespace tcentroid::sampler
