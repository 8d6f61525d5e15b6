#include "icorr/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace icorr {
namespace {

double pathloss(double r, double alpha) {
  return r > 1.0 ? std::pow(r, -alpha) : 1.0;
}

// Product of losses over obstacle indices [first, last), via the prefixes
// when present, directly otherwise.
double loss_product(const Realization& r, std::size_t first,
                    std::size_t last) {
  if (first >= last) return 1.0;
  if (r.loss_log_prefix.size() == r.obstacle_losses.size() + 1) {
    if (r.zero_prefix[last] > r.zero_prefix[first]) return 0.0;
    return std::exp(r.loss_log_prefix[last] - r.loss_log_prefix[first]);
  }
  double beta = 1.0;
  for (std::size_t i = first; i < last && beta != 0.0; ++i) {
    beta *= r.obstacle_losses[i];
  }
  return beta;
}

// Engine for trial k of a run: seeded from (seed, k) only, so any execution
// order or thread layout reproduces the same stream.
std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffULL),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial & 0xffffffffULL),
                    static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

// One trial: obstacle field shared by both slots; Static reuses the user
// positions, IidMobility redraws them (same users, new locations).
void run_trial(const NetworkParams& params, const ObservationPoint& point,
               MobilityMode mode, std::uint64_t seed, std::uint64_t trial,
               double& slot_t, double& slot_tau) {
  std::mt19937_64 rng = trial_engine(seed, trial);
  Realization r = sample_realization(params, rng);
  slot_t = interference_once(r, point, params, rng);
  if (mode == MobilityMode::IidMobility) {
    std::uniform_real_distribution<double> pos(-params.half_len,
                                               params.half_len);
    for (double& x : r.user_positions) x = pos(rng);
  }
  slot_tau = interference_once(r, point, params, rng);
}

void fill_pairs(const NetworkParams& params, const ObservationPoint& point,
                MobilityMode mode, std::uint64_t trials, std::uint64_t seed,
                std::vector<double>& xs, std::vector<double>& ys,
                bool parallel) {
  xs.resize(trials);
  ys.resize(trials);
  const auto n = static_cast<std::int64_t>(trials);
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) {
      run_trial(params, point, mode, seed, static_cast<std::uint64_t>(i),
                xs[i], ys[i]);
    }
  } else {
    for (std::int64_t i = 0; i < n; ++i) {
      run_trial(params, point, mode, seed, static_cast<std::uint64_t>(i),
                xs[i], ys[i]);
    }
  }
}

// Sample standard deviation of per-trial values v_i = f(x_i, y_i), over
// sqrt(n), accumulated in trial order.
template <typename F>
EstimateWithSe with_se(const std::vector<double>& xs,
                       const std::vector<double>& ys, double value, F f) {
  const std::size_t n = xs.size();
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = f(xs[i], ys[i]) - value;
    ss += d * d;
  }
  const double var = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
  return {value, std::sqrt(var / static_cast<double>(n))};
}

McEstimate reduce_pairs(const std::vector<double>& xs,
                        const std::vector<double>& ys, std::uint64_t trials,
                        std::uint64_t seed) {
  const std::size_t n = xs.size();
  const double dn = static_cast<double>(n);
  double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    syy += ys[i] * ys[i];
    sxy += xs[i] * ys[i];
  }

  McEstimate est;
  est.trials = trials;
  est.seed = seed;
  est.mean_hat = with_se(xs, ys, (sx + sy) / (2.0 * dn),
                         [](double x, double y) { return 0.5 * (x + y); });
  est.second_moment_hat =
      with_se(xs, ys, (sxx + syy) / (2.0 * dn),
              [](double x, double y) { return 0.5 * (x * x + y * y); });
  est.cross_hat = with_se(xs, ys, sxy / dn,
                          [](double x, double y) { return x * y; });

  // Pooled-variance Pearson: covariance over the mean of the two slot
  // variances.  AM-GM keeps it inside [-1, 1] by construction.
  const double cxx = sxx - sx * sx / dn;
  const double cyy = syy - sy * sy / dn;
  const double cxy = sxy - sx * sy / dn;
  const double pooled = 0.5 * (cxx + cyy);
  if (!(pooled > 0.0)) {
    throw std::runtime_error(
        "insufficient activity: sampled interference has zero variance");
  }
  const double rho = cxy / pooled;

  // Jackknife standard error from the five running sums.
  const double n1 = dn - 1.0;
  double jsum = 0.0, jsq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = sx - xs[i];
    const double ly = sy - ys[i];
    const double lxx = (sxx - xs[i] * xs[i]) - lx * lx / n1;
    const double lyy = (syy - ys[i] * ys[i]) - ly * ly / n1;
    const double lxy = (sxy - xs[i] * ys[i]) - lx * ly / n1;
    const double lpool = 0.5 * (lxx + lyy);
    const double ri = lpool > 0.0 ? lxy / lpool : rho;
    jsum += ri;
    jsq += ri * ri;
  }
  const double jvar = std::max(0.0, (n1 / dn) * (jsq - jsum * jsum / dn));
  est.rho_hat = {rho, std::sqrt(jvar)};
  return est;
}

McEstimate estimate_impl(const NetworkParams& params,
                         const ObservationPoint& point, MobilityMode mode,
                         std::uint64_t trials, std::uint64_t seed,
                         bool parallel) {
  params.validate();
  if (!(std::abs(point.y_p) <= params.half_len)) {
    throw std::invalid_argument("observation point outside the segment");
  }
  if (trials < 1000) {
    throw std::invalid_argument("trials must be at least 1000");
  }
  std::vector<double> xs, ys;
  fill_pairs(params, point, mode, trials, seed, xs, ys, parallel);
  return reduce_pairs(xs, ys, trials, seed);
}

}  // namespace

void Realization::index_losses() {
  const std::size_t n = obstacle_losses.size();
  loss_log_prefix.assign(n + 1, 0.0);
  zero_prefix.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = obstacle_losses[i];
    zero_prefix[i + 1] = zero_prefix[i] + (f == 0.0 ? 1 : 0);
    loss_log_prefix[i + 1] =
        loss_log_prefix[i] + (f == 0.0 ? 0.0 : std::log(f));
  }
}

Realization sample_realization(const NetworkParams& params,
                               std::mt19937_64& rng) {
  params.validate();
  const double V = params.half_len;
  std::uniform_real_distribution<double> pos(-V, V);

  Realization r;
  const double user_mean = 2.0 * params.lambda * V;
  const double obstacle_mean = 2.0 * params.mu * V;
  // poisson_distribution requires a positive mean.
  const std::int64_t n_users =
      user_mean > 0.0 ? std::poisson_distribution<std::int64_t>(user_mean)(rng)
                      : 0;
  const std::int64_t n_obstacles =
      obstacle_mean > 0.0
          ? std::poisson_distribution<std::int64_t>(obstacle_mean)(rng)
          : 0;

  r.user_positions.resize(n_users);
  for (double& x : r.user_positions) x = pos(rng);

  std::vector<std::pair<double, double>> field(n_obstacles);
  std::uniform_real_distribution<double> loss(0.0, params.gamma);
  for (auto& [position, factor] : field) {
    position = pos(rng);
    factor = params.gamma > 0.0 ? loss(rng) : 0.0;
  }
  std::sort(field.begin(), field.end());
  r.obstacle_positions.resize(n_obstacles);
  r.obstacle_losses.resize(n_obstacles);
  for (std::int64_t i = 0; i < n_obstacles; ++i) {
    r.obstacle_positions[i] = field[i].first;
    r.obstacle_losses[i] = field[i].second;
  }
  r.index_losses();
  return r;
}

double interference_once(const Realization& realization,
                         const ObservationPoint& point,
                         const NetworkParams& params, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> fading(1.0);
  const auto& obstacles = realization.obstacle_positions;

  double total = 0.0;
  for (double x : realization.user_positions) {
    // Activity and fading are consumed unconditionally so the stream
    // position does not depend on earlier outcomes.
    const bool active = unit(rng) < params.xi;
    const double h = fading(rng);
    if (!active) continue;

    const double lo = std::min(x, point.y_p);
    const double hi = std::max(x, point.y_p);
    const std::size_t first =
        std::upper_bound(obstacles.begin(), obstacles.end(), lo) -
        obstacles.begin();
    const std::size_t last =
        std::lower_bound(obstacles.begin(), obstacles.end(), hi) -
        obstacles.begin();
    const double beta = loss_product(realization, first, last);
    if (beta == 0.0) continue;
    total += params.p_t * h * beta * pathloss(hi - lo, params.alpha);
  }
  return total;
}

McEstimate estimate(const NetworkParams& params, const ObservationPoint& point,
                    MobilityMode mode, std::uint64_t trials,
                    std::uint64_t seed) {
  return estimate_impl(params, point, mode, trials, seed, true);
}

McEstimate estimate_reference(const NetworkParams& params,
                              const ObservationPoint& point, MobilityMode mode,
                              std::uint64_t trials, std::uint64_t seed) {
  return estimate_impl(params, point, mode, trials, seed, false);
}

}  // namespace icorr
