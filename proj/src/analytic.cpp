#include "icorr/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "icorr/specfun.hpp"

namespace icorr {
namespace {

// Parameters below these thresholds route to the exact limit branches; the
// general formulas are 0/0 there.
constexpr double kMuZero = 1e-12;
constexpr double kGammaZero = 1e-12;

// phi(x) = (1 - e^{-x}) / x, the segment average of an exponential profile.
double phi(double x) {
  if (x < 1e-300) return 1.0;
  return -std::expm1(-x) / x;
}

// phi'(x), stable on both sides of the cancellation region.
double dphi(double x) {
  if (x >= 0.5) {
    return (std::exp(-x) * (1.0 + x) - 1.0) / (x * x);
  }
  // Alternating series sum_{k>=1} (-1)^k k x^{k-1} / (k+1)!.
  double sum = 0.0;
  double factorial = 2.0;  // (k+1)! running value
  double x_pow = 1.0;      // x^{k-1}
  double sign = -1.0;
  for (int k = 1; k <= 40; ++k) {
    const double term = sign * k * x_pow / factorial;
    sum += term;
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-30)) break;
    sign = -sign;
    x_pow *= x;
    factorial *= (k + 2);
  }
  return sum;
}

// (phi(m) - phi(q)) / (q - m) without cancellation: the divided difference
// equals -integral over s in [0,1] of phi'(m + s (q - m)).
double phi_divided_difference(double m, double q) {
  const double b = q - m;
  const QuadSpec spec{1e-13, 0.0, 200};
  return integrate([m, b](double s) { return -dphi(m + s * b); }, 0.0, 1.0,
                   spec);
}

// integral over x in [0, V] of e^{-r x} min{1, x^{-n}}.
double profile_integral(double n, double r, double V) {
  if (r < 1e-300) {
    return 1.0 + (1.0 - std::pow(V, 1.0 - n)) / (n - 1.0);
  }
  return phi(r) + exp_integral_en(n, r) -
         std::pow(V, 1.0 - n) * exp_integral_en(n, r * V);
}

struct Rates {
  double m;  // first-moment attenuation rate  mu (2 - gamma) / 2
  double q;  // second-moment attenuation rate mu (3 - gamma^2) / 3
  double b;  // q - m = mu gamma (3 - 2 gamma) / 6
};

Rates rates_of(double mu, double gamma) {
  return {mu * (2.0 - gamma) / 2.0, mu * (3.0 - gamma * gamma) / 3.0,
          mu * gamma * (3.0 - 2.0 * gamma) / 6.0};
}

// sigma2 for impenetrable obstacles (gamma = 0): any shared obstacle zeroes
// the product, so only the obstacle-free stretch beyond max(x, y) matters.
double sigma2_impenetrable(const NetworkParams& p) {
  const double mu = p.mu;
  const double a = p.alpha;
  const double V = p.half_len;
  const double head =
      (-std::expm1(-mu) - mu * std::exp(-mu)) / (mu * mu);
  const double mid = a / (a - 1.0) *
                     (exp_integral_en(a, mu) -
                      std::pow(V, 1.0 - a) * exp_integral_en(a, mu * V));
  const double tail = (std::pow(V, 2.0 * (1.0 - a)) *
                           exp_integral_en(2.0 * a - 1.0, mu * V) -
                       exp_integral_en(2.0 * a - 1.0, mu)) /
                      (a - 1.0);
  const double lx = p.lambda * p.xi * p.p_t;
  return 4.0 * lx * lx * (head + mid + tail);
}

double sigma2_general(const NetworkParams& p, const Rates& r,
                      const AnalyticOptions& opts) {
  const double a = p.alpha;
  const double V = p.half_len;
  const double t1 = phi_divided_difference(r.m, r.q);
  const double ea_m = exp_integral_en(a, r.m) -
                      std::pow(V, 1.0 - a) * exp_integral_en(a, r.m * V);
  const double t23 = (phi(r.b) + exp_integral_en(a, r.b)) * ea_m;
  const double i0 = opts.laplace_i0
                        ? i0_laplace(a, p.mu, p.gamma)
                        : i0_exact(a, p.mu, p.gamma, V, {1e-11, 1e-14, 400});
  const double lx = p.lambda * p.xi * p.p_t;
  return 4.0 * lx * lx * (t1 + t23 - i0);
}

NetworkParams effective(const NetworkParams& params) {
  NetworkParams p = params;
  if (p.mu < kMuZero) p.mu = 0.0;
  if (p.gamma < kGammaZero) p.gamma = 0.0;
  return p;
}

CorrelationResult assemble_rho(const NetworkParams& p, const MomentSet& ms) {
  if (p.lambda * p.xi <= 0.0) {
    throw std::domain_error("correlation undefined for lambda * xi = 0");
  }
  const double pt2 = p.p_t * p.p_t;
  const double excess = ms.sigma - ms.mean * ms.mean;
  const double denom = 2.0 * p.lambda * p.xi * pt2 * ms.i_integral + excess;
  const double static_num =
      p.lambda * p.xi * p.xi * pt2 * ms.i_integral + excess;
  const double mobile_num =
      ms.sigma / (2.0 * p.lambda * p.half_len) + excess;
  return {static_num / denom, mobile_num / denom, RhoMethod::Exact};
}

}  // namespace

double mean_interference(const NetworkParams& params) {
  const NetworkParams p = effective(params);
  p.validate();
  const Rates r = rates_of(p.mu, p.gamma);
  return 2.0 * p.lambda * p.xi * p.p_t *
         profile_integral(p.alpha, r.m, p.half_len);
}

MomentSet moments(const NetworkParams& params, const AnalyticOptions& opts) {
  const NetworkParams p = effective(params);
  p.validate();
  const Rates r = rates_of(p.mu, p.gamma);

  MomentSet ms;
  ms.mean = 2.0 * p.lambda * p.xi * p.p_t *
            profile_integral(p.alpha, r.m, p.half_len);
  ms.i_integral = 2.0 * profile_integral(2.0 * p.alpha, r.q, p.half_len);

  const double mean_sq = ms.mean * ms.mean;
  ms.sigma1 = 0.5 * mean_sq;
  if (p.mu == 0.0) {
    // Different users' losses are independent without obstacles, so the
    // cross-user term collapses to mean^2 exactly.
    ms.sigma2 = ms.sigma1;
  } else if (p.gamma == 0.0) {
    ms.sigma2 = sigma2_impenetrable(p);
  } else {
    ms.sigma2 = sigma2_general(p, r, opts);
  }
  ms.sigma = ms.sigma1 + ms.sigma2;
  ms.second_moment =
      2.0 * p.lambda * p.xi * p.p_t * p.p_t * ms.i_integral + ms.sigma;
  ms.variance = ms.second_moment - mean_sq;
  return ms;
}

MomentSet second_moment(const NetworkParams& params,
                        const AnalyticOptions& opts) {
  return moments(params, opts);
}

MomentSet sigma_terms(const NetworkParams& params,
                      const AnalyticOptions& opts) {
  return moments(params, opts);
}

double cross_moment(const NetworkParams& params, MobilityMode mode,
                    const AnalyticOptions& opts) {
  const NetworkParams p = effective(params);
  const MomentSet ms = moments(p, opts);
  if (mode == MobilityMode::Static) {
    return p.lambda * p.xi * p.xi * p.p_t * p.p_t * ms.i_integral + ms.sigma;
  }
  if (!(p.lambda > 0.0)) {
    throw std::domain_error("mobile cross moment requires lambda > 0");
  }
  return ms.sigma / (2.0 * p.lambda * p.half_len) + ms.sigma;
}

CorrelationResult rho(const NetworkParams& params, const AnalyticOptions& opts) {
  const NetworkParams p = effective(params);
  return assemble_rho(p, moments(p, opts));
}

CorrelationResult rho_no_blockage(const NetworkParams& params) {
  NetworkParams p = params;
  p.mu = 0.0;
  p.validate();
  const double a = p.alpha;
  const double V = p.half_len;
  const double num = p.xi * (2.0 * a - 1.0) *
                     std::pow(a - std::pow(V, 1.0 - a), 2.0);
  const double den = 2.0 * V * (a - 1.0) * (a - 1.0) *
                     (2.0 * a - std::pow(V, 1.0 - 2.0 * a));
  return {p.xi / 2.0, num / den, RhoMethod::NoBlockageClosedForm};
}

CorrelationResult rho_high_mu(const NetworkParams& params) {
  const NetworkParams p = effective(params);
  p.validate();
  if (p.mu == 0.0) {
    throw std::domain_error("dense-blockage expansion requires mu > 0");
  }
  const double ratio = p.p();
  const double g = p.gamma;
  const double x = p.xi;
  const double first = 12.0 * x * ratio * (2.0 - g);
  const double second = 4.0 * x * ratio * (3.0 - g * g);
  const double den = 6.0 * (2.0 - g) * (2.0 - g) + first - second;
  const double rho0 = (3.0 * x * (2.0 - g) * (2.0 - g) + first - second) / den;
  const double w = 1.0 / (2.0 * p.lambda * p.half_len);
  const double rho_inf = ((1.0 + w) * first - (1.0 - w) * second) / den;
  return {rho0, rho_inf, RhoMethod::HighMuExpansion};
}

CorrelationResult rho_high_mu_series(const NetworkParams& params) {
  const NetworkParams p = effective(params);
  p.validate();
  if (p.mu == 0.0) {
    throw std::domain_error("dense-blockage expansion requires mu > 0");
  }
  const double ratio = p.p();
  const double g = p.gamma;
  const double x = p.xi;
  // Shared coefficient (3 - 3 gamma + gamma^2) / (3 (2 - gamma)^2) of both
  // expansions; positive for gamma in [0, 1].
  const double k = (3.0 - 3.0 * g + g * g) / (3.0 * (2.0 - g) * (2.0 - g));
  const double rho0 = x / 2.0 + k * (2.0 - x) * x * ratio -
                      2.0 * k * k * (2.0 - x) * x * x * ratio * ratio;
  const double rho_inf =
      2.0 * x * k * ratio - 4.0 * x * x * k * k * ratio * ratio;
  return {rho0, rho_inf, RhoMethod::HighMuExpansion};
}

namespace {

// Point-engine pieces.  All integrals run over link distance r measured
// from the observation point, split at the pathloss breakpoint r = 1.
struct PointEngine {
  double m, q, b, alpha;

  double pathloss(double r) const {
    return r > 1.0 ? std::pow(r, -alpha) : 1.0;
  }

  // integral over t in [0, r] of e^{-b t} l(t): closed antiderivative of the
  // correlated-stretch weight, used inside the same-side double integral.
  double inner(double r) const {
    if (b < 1e-300) {
      return r <= 1.0 ? r : 1.0 + (1.0 - std::pow(r, 1.0 - alpha)) / (alpha - 1.0);
    }
    if (r <= 1.0) {
      return -std::expm1(-b * r) / b;
    }
    return -std::expm1(-b) / b + exp_integral_en(alpha, b) -
           std::pow(r, 1.0 - alpha) * exp_integral_en(alpha, b * r);
  }

  double quad(const std::function<double(double)>& f, double hi) const {
    const QuadSpec spec{1e-11, 1e-15, 400};
    if (hi <= 0.0) return 0.0;
    if (hi <= 1.0) return integrate(f, 0.0, hi, spec);
    return integrate(f, 0.0, 1.0, spec) + integrate(f, 1.0, hi, spec);
  }

  // integral over [0, D] of e^{-m r} l(r).
  double first_profile(double D) const {
    return quad([this](double r) { return std::exp(-m * r) * pathloss(r); }, D);
  }

  // integral over [0, D] of e^{-q r} l(r)^2.
  double second_profile(double D) const {
    return quad(
        [this](double r) {
          const double l = pathloss(r);
          return std::exp(-q * r) * l * l;
        },
        D);
  }

  // Same-side part of the cross-user double integral over [0, D]^2.
  double same_side(double D) const {
    return quad(
        [this](double r) {
          return 2.0 * pathloss(r) * std::exp(-m * r) * inner(r);
        },
        D);
  }
};

MomentSet point_moments(const NetworkParams& p, const ObservationPoint& point) {
  if (!(std::abs(point.y_p) <= p.half_len)) {
    throw std::invalid_argument("observation point outside the segment");
  }
  const Rates r = rates_of(p.mu, p.gamma);
  const PointEngine eng{r.m, r.q, r.b, p.alpha};
  const double span_left = point.y_p + p.half_len;
  const double span_right = p.half_len - point.y_p;

  const double a_left = eng.first_profile(span_left);
  const double a_right = eng.first_profile(span_right);
  const double lx = p.lambda * p.xi * p.p_t;

  MomentSet ms;
  ms.mean = lx * (a_left + a_right);
  ms.i_integral = eng.second_profile(span_left) + eng.second_profile(span_right);
  ms.sigma = lx * lx *
             (eng.same_side(span_left) + eng.same_side(span_right) +
              2.0 * a_left * a_right);
  ms.sigma1 = 0.5 * ms.mean * ms.mean;
  ms.sigma2 = ms.sigma - ms.sigma1;
  ms.second_moment =
      2.0 * p.lambda * p.xi * p.p_t * p.p_t * ms.i_integral + ms.sigma;
  ms.variance = ms.second_moment - ms.mean * ms.mean;
  return ms;
}

}  // namespace

MomentSet moments_at_point(const NetworkParams& params,
                           const ObservationPoint& point,
                           const AnalyticOptions&) {
  const NetworkParams p = effective(params);
  p.validate();
  return point_moments(p, point);
}

double cross_moment_at_point(const NetworkParams& params,
                             const ObservationPoint& point, MobilityMode mode,
                             const AnalyticOptions& opts) {
  const NetworkParams p = effective(params);
  p.validate();
  const MomentSet ms = moments_at_point(p, point, opts);
  if (mode == MobilityMode::Static) {
    return p.lambda * p.xi * p.xi * p.p_t * p.p_t * ms.i_integral + ms.sigma;
  }
  if (!(p.lambda > 0.0)) {
    throw std::domain_error("mobile cross moment requires lambda > 0");
  }
  return ms.sigma / (2.0 * p.lambda * p.half_len) + ms.sigma;
}

CorrelationResult rho_at_point(const NetworkParams& params,
                               const ObservationPoint& point,
                               const AnalyticOptions& opts) {
  const NetworkParams p = effective(params);
  p.validate();
  return assemble_rho(p, moments_at_point(p, point, opts));
}

double critical_density(const NetworkParams& params) {
  NetworkParams p = effective(params);
  p.validate();
  if (p.mu == 0.0) {
    throw std::domain_error("critical density requires mu > 0");
  }
  const double target = rho_no_blockage(p).rho_inf;
  auto excess = [&p, target](double lambda) {
    NetworkParams q = p;
    q.lambda = lambda;
    return rho(q).rho_inf - target;
  };

  double lo = 1e-6;
  double hi = 1e3 * std::max(1.0, p.mu);
  while (excess(lo) > 0.0 && lo > 1e-12) lo *= 0.1;
  while (excess(hi) < 0.0 && hi < 1e12) hi *= 10.0;
  if (excess(lo) > 0.0 || excess(hi) < 0.0) {
    throw std::runtime_error(
        "no crossing of the obstacle-free correlation within the bracket");
  }
  while ((hi - lo) > 1e-8 * 0.5 * (hi + lo)) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double critical_density_closed_form(const NetworkParams& params) {
  params.validate();
  if (!(params.mu > 0.0)) {
    throw std::domain_error("critical density requires mu > 0");
  }
  return 9.0 * params.mu / (4.0 * params.half_len - 6.0);
}

}  // namespace icorr
