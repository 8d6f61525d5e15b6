#pragma once

namespace icorr {

// Two links seen from one observation point.  Distances are |x_i - y_p| and
// |x_j - y_p|; the links share obstacles exactly when both sources lie on
// the same side of the observation point.
struct LinkGeometry {
  double d_i = 0.0;
  double d_j = 0.0;
  bool shares_obstacles = false;
};

// E{beta^s} for one link of length d: obstacles form a Poisson process of
// density mu on the link, each contributing an independent Uniform[0, gamma]
// factor.  Equals exp(-mu d (1 - gamma^s / (1 + s))).
double penetration_moment(double s, double d, double mu, double gamma);

// E{beta_i beta_j} for two links.  Disjoint links factor into first moments;
// overlapping links share the obstacles on the common stretch, which raises
// the expectation: the overlap of length min(d_i, d_j) carries the second
// moment rate, the remainder |d_i - d_j| the first moment rate.
double penetration_cross_moment(const LinkGeometry& geom, double mu,
                                double gamma);

}  // namespace icorr
