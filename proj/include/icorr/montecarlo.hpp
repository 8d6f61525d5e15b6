#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "icorr/params.hpp"

namespace icorr {

// One sampled network: user and obstacle positions plus per-obstacle loss
// factors.  The obstacle field is fixed across the two time slots of a
// trial; the loss prefixes are derived data for O(log n) link products.
struct Realization {
  std::vector<double> user_positions;
  std::vector<double> obstacle_positions;  // sorted ascending
  std::vector<double> obstacle_losses;     // aligned with obstacle_positions

  // Prefix sums of log losses and running zero counts over the sorted
  // obstacle list.  sample_realization fills them; call index_losses()
  // after building a Realization by hand.
  std::vector<double> loss_log_prefix;
  std::vector<std::int64_t> zero_prefix;

  void index_losses();
};

struct EstimateWithSe {
  double value = 0.0;
  double se = 0.0;  // sample standard deviation / sqrt(trials)
};

// Empirical moments and temporal correlation from paired-slot sampling.
struct McEstimate {
  EstimateWithSe mean_hat;
  EstimateWithSe second_moment_hat;
  EstimateWithSe cross_hat;
  EstimateWithSe rho_hat;  // pooled-variance Pearson; se by jackknife
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

// Draws user count ~ Poisson(2 lambda V), obstacle count ~ Poisson(2 mu V),
// positions i.i.d. Uniform[-V, V], losses i.i.d. Uniform[0, gamma].
Realization sample_realization(const NetworkParams& params,
                               std::mt19937_64& rng);

// One slot of interference at the observation point: fresh Bernoulli(xi)
// activity and Exponential(1) fading per user, loss product over obstacles
// strictly between user and point, pathloss min{1, r^-alpha}.
double interference_once(const Realization& realization,
                         const ObservationPoint& point,
                         const NetworkParams& params, std::mt19937_64& rng);

// Paired-slot Monte Carlo over `trials` independent trials.  Per trial the
// obstacle field and losses are drawn once; Static keeps one user set for
// both slots, IidMobility redraws the positions of the same users for the
// second slot.  Deterministic for fixed (seed, trials) regardless of how
// many threads execute; trials must be >= 1000.  Throws "insufficient
// activity" when the sampled interference has zero variance.
McEstimate estimate(const NetworkParams& params, const ObservationPoint& point,
                    MobilityMode mode, std::uint64_t trials,
                    std::uint64_t seed);

// Serial twin of estimate(), bit-identical by construction; kept as the
// reference for the parallel path and for benchmarking.
McEstimate estimate_reference(const NetworkParams& params,
                              const ObservationPoint& point, MobilityMode mode,
                              std::uint64_t trials, std::uint64_t seed);

}  // namespace icorr
