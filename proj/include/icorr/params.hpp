#pragma once

#include <cmath>
#include <stdexcept>

namespace icorr {

// Model constants for one experiment.  Users and obstacles form independent
// Poisson processes on the segment [-half_len, half_len]; each obstacle
// attenuates crossing links by an independent Uniform[0, gamma] factor;
// users transmit with probability xi per slot under Rayleigh fading and the
// bounded pathloss min{1, r^-alpha}.
struct NetworkParams {
  double lambda = 1.0;    // user density per unit length, >= 0
  double mu = 0.0;        // obstacle density per unit length, >= 0
  double gamma = 1.0;     // max per-obstacle loss factor, in [0, 1]
  double xi = 1.0;        // per-slot transmit probability, in (0, 1]
  double alpha = 2.0;     // pathloss exponent, >= 2
  double half_len = 25.0; // segment half-length, > 1
  double p_t = 1.0;       // transmit power

  void validate() const {
    if (!std::isfinite(lambda) || lambda < 0.0) {
      throw std::invalid_argument("lambda must be finite and >= 0");
    }
    if (!std::isfinite(mu) || mu < 0.0) {
      throw std::invalid_argument("mu must be finite and >= 0");
    }
    if (!(gamma >= 0.0) || !(gamma <= 1.0)) {
      throw std::invalid_argument("gamma must lie in [0, 1]");
    }
    if (!(xi > 0.0) || !(xi <= 1.0)) {
      throw std::invalid_argument("xi must lie in (0, 1]");
    }
    if (!std::isfinite(alpha) || alpha < 2.0) {
      throw std::invalid_argument("alpha must be finite and >= 2");
    }
    // The closed forms split the pathloss at distance 1, which must lie
    // inside the domain.
    if (!std::isfinite(half_len) || half_len <= 1.0) {
      throw std::invalid_argument("half_len must be finite and > 1");
    }
    if (!(p_t > 0.0) || !std::isfinite(p_t)) {
      throw std::invalid_argument("p_t must be finite and > 0");
    }
  }

  // User-to-obstacle density ratio; meaningful only under blockage.
  double p() const {
    if (!(mu > 0.0)) {
      throw std::domain_error("density ratio requires mu > 0");
    }
    return lambda / mu;
  }
};

enum class PointKind { Center, Boundary, General };

// Location where interference is measured.
struct ObservationPoint {
  double y_p = 0.0;
  PointKind kind = PointKind::Center;

  static ObservationPoint center() { return {0.0, PointKind::Center}; }

  static ObservationPoint boundary(double half_len) {
    return {half_len, PointKind::Boundary};
  }

  static ObservationPoint at(double y, double half_len) {
    if (!(std::abs(y) <= half_len)) {
      throw std::invalid_argument("observation point outside the segment");
    }
    if (y == 0.0) return center();
    if (std::abs(y) == half_len) return {y, PointKind::Boundary};
    return {y, PointKind::General};
  }
};

enum class MobilityMode { Static, IidMobility };

// Analytic interference moments for one parameter set.
// sigma is the cross-user term of the second moment; sigma1 its
// uncorrelated part (always mean^2 / 2) and sigma2 the part induced by
// shared obstacles.  variance = second_moment - mean^2.
struct MomentSet {
  double mean = 0.0;
  double second_moment = 0.0;
  double i_integral = 0.0;  // integral of E{beta^2} l^2 over the segment
  double sigma = 0.0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double variance = 0.0;
};

enum class RhoMethod { Exact, NoBlockageClosedForm, HighMuExpansion };

// Temporal Pearson correlation of interference for the two mobility limits.
struct CorrelationResult {
  double rho0 = 0.0;      // static users
  double rho_inf = 0.0;   // positions redrawn independently every slot
  RhoMethod method = RhoMethod::Exact;
};

inline double correlation(const CorrelationResult& r, MobilityMode mode) {
  return mode == MobilityMode::Static ? r.rho0 : r.rho_inf;
}

}  // namespace icorr
