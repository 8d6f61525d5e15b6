#include "icorr/blockage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace icorr {
namespace {

void check_common(double mu, double gamma) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw std::domain_error("blockage density must be finite and >= 0");
  }
  if (!(gamma >= 0.0) || !(gamma <= 1.0)) {
    throw std::domain_error("max penetration loss must lie in [0, 1]");
  }
}

}  // namespace

double penetration_moment(double s, double d, double mu, double gamma) {
  check_common(mu, gamma);
  if (!(s > 0.0)) {
    throw std::domain_error("moment order must be positive");
  }
  if (!(d >= 0.0) || !std::isfinite(d)) {
    throw std::domain_error("link distance must be finite and >= 0");
  }
  return std::exp(-mu * d * (1.0 - std::pow(gamma, s) / (1.0 + s)));
}

double penetration_cross_moment(const LinkGeometry& geom, double mu,
                                double gamma) {
  check_common(mu, gamma);
  if (!(geom.d_i >= 0.0) || !(geom.d_j >= 0.0) ||
      !std::isfinite(geom.d_i) || !std::isfinite(geom.d_j)) {
    throw std::domain_error("link distances must be finite and >= 0");
  }
  const double first_rate = 1.0 - gamma / 2.0;
  if (!geom.shares_obstacles) {
    return std::exp(-mu * (geom.d_i + geom.d_j) * first_rate);
  }
  const double overlap = std::min(geom.d_i, geom.d_j);
  const double excess = std::abs(geom.d_i - geom.d_j);
  const double second_rate = 1.0 - gamma * gamma / 3.0;
  return std::exp(-mu * overlap * second_rate) *
         std::exp(-mu * excess * first_rate);
}

}  // namespace icorr
