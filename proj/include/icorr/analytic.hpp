#pragma once

#include "icorr/params.hpp"
#include "icorr/quadrature.hpp"

namespace icorr {

struct AnalyticOptions {
  // Route the correlated-obstacle integral I0 through the second-order
  // endpoint approximation instead of quadrature.  Off by default; the
  // approximation is accurate once mu (2 - gamma) / 2 is of order 1.
  bool laplace_i0 = false;
};

// Mean interference at the segment center.
double mean_interference(const NetworkParams& params);

// All analytic moments at the segment center: mean, the i-integral
// (integral of E{beta^2} l^2 over the segment), sigma terms, second moment
// and variance.
MomentSet moments(const NetworkParams& params, const AnalyticOptions& opts = {});

// Named entry points for callers that want one moment; each returns the
// full set, the extra members costing nothing.
MomentSet second_moment(const NetworkParams& params,
                        const AnalyticOptions& opts = {});
MomentSet sigma_terms(const NetworkParams& params,
                      const AnalyticOptions& opts = {});

// E{I(t) I(tau)} at the center for the given mobility mode.
double cross_moment(const NetworkParams& params, MobilityMode mode,
                    const AnalyticOptions& opts = {});

// Exact temporal correlation coefficients at the segment center.
CorrelationResult rho(const NetworkParams& params,
                      const AnalyticOptions& opts = {});

// Closed forms for the obstacle-free network (mu ignored): rho0 = xi / 2 and
// the bounded-domain rho_inf expression.
CorrelationResult rho_no_blockage(const NetworkParams& params);

// Dense-blockage approximation in the density ratio p = lambda / mu,
// as closed fractional forms.  Requires mu > 0.
CorrelationResult rho_high_mu(const NetworkParams& params);

// Same expansion truncated as a series to O(p^3).  Diverges from the
// fractional forms once p approaches 1; exposed for small-p analysis.
CorrelationResult rho_high_mu_series(const NetworkParams& params);

// Moments and correlation at an arbitrary observation point, evaluated by
// quadrature with the shared/disjoint obstacle split at the point.
MomentSet moments_at_point(const NetworkParams& params,
                           const ObservationPoint& point,
                           const AnalyticOptions& opts = {});
double cross_moment_at_point(const NetworkParams& params,
                             const ObservationPoint& point, MobilityMode mode,
                             const AnalyticOptions& opts = {});
CorrelationResult rho_at_point(const NetworkParams& params,
                               const ObservationPoint& point,
                               const AnalyticOptions& opts = {});

// Critical user density: the lambda at which rho_inf under blockage equals
// the obstacle-free rho_inf of the same domain.  rho_inf increases strictly
// in lambda, so the crossing is unique.  Requires mu > 0.
double critical_density(const NetworkParams& params);

// Companion closed form 9 mu / (4 V - 6), derived for alpha = 2,
// gamma = xi = 1 and large V.
double critical_density_closed_form(const NetworkParams& params);

}  // namespace icorr
