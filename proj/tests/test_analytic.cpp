#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "icorr/analytic.hpp"
#include "oracle.hpp"

using namespace icorr;

namespace {

NetworkParams make(double lambda, double mu, double gamma, double xi,
                   double alpha, double half_len) {
  NetworkParams p;
  p.lambda = lambda;
  p.mu = mu;
  p.gamma = gamma;
  p.xi = xi;
  p.alpha = alpha;
  p.half_len = half_len;
  return p;
}

// The two mu = 0 closed forms as printed: center with denominator 2V,
// boundary with denominator 4V.  Same numerator, so their ratio is exactly
// one half for every (a, V, xi).
double printed_center_rho_inf(double xi, double a, double V) {
  const double num = xi * std::pow(a - std::pow(V, 1.0 - a), 2.0) *
                     (2.0 * a - 1.0);
  return num / (2.0 * V * (a - 1.0) * (a - 1.0) *
                (2.0 * a - std::pow(V, 1.0 - 2.0 * a)));
}

double printed_boundary_rho_inf(double xi, double a, double V) {
  const double num = xi * std::pow(a - std::pow(V, 1.0 - a), 2.0) *
                     (2.0 * a - 1.0);
  return num / (4.0 * V * (a - 1.0) * (a - 1.0) *
                (2.0 * a - std::pow(V, 1.0 - 2.0 * a)));
}

double mean_by_quadrature(const NetworkParams& p) {
  const double m = p.mu * (2.0 - p.gamma) / 2.0;
  return 2.0 * p.lambda * p.xi * p.p_t *
         oracle::simpson(
             [&](double x) {
               return std::exp(-m * x) * oracle::pathloss(x, p.alpha);
             },
             0.0, p.half_len, 1e-13);
}

double i_integral_by_quadrature(const NetworkParams& p) {
  const double q = p.mu * (3.0 - p.gamma * p.gamma) / 3.0;
  return 2.0 * oracle::simpson(
                   [&](double x) {
                     const double l = oracle::pathloss(x, p.alpha);
                     return std::exp(-q * x) * l * l;
                   },
                   0.0, p.half_len, 1e-13);
}

}  // namespace

TEST_SUITE("analytic") {

TEST_CASE("mean interference: frozen values and scaling") {
  CHECK(mean_interference(make(1, 0, 1, 1, 2, 25)) ==
        doctest::Approx(3.92).epsilon(1e-14));
  CHECK(mean_interference(make(1, 1, 1, 1, 2, 25)) ==
        doctest::Approx(2.2271650650607726).epsilon(1e-12));
  // Depends on lambda and xi only through their product.
  CHECK(mean_interference(make(2, 0, 1, 0.5, 2, 25)) ==
        mean_interference(make(1, 0, 1, 1, 2, 25)));
  // Linear in the product.
  CHECK(mean_interference(make(3, 1, 1, 1, 2, 25)) ==
        doctest::Approx(3.0 * mean_interference(make(1, 1, 1, 1, 2, 25)))
            .epsilon(1e-14));
}

TEST_CASE("mean interference matches its defining integral") {
  for (double mu : {0.0, 0.5, 2.0}) {
    for (double gamma : {0.3, 1.0}) {
      for (double alpha : {2.0, 3.0}) {
        const NetworkParams p = make(1, mu, gamma, 1, alpha, 25);
        CHECK(mean_interference(p) ==
              doctest::Approx(mean_by_quadrature(p)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("i_integral: frozen values, quadrature consistency, large-mu tail") {
  CHECK(moments(make(1, 0, 1, 1, 2, 25)).i_integral ==
        doctest::Approx(2.0 * (1.0 + (1.0 - std::pow(25.0, -3.0)) / 3.0))
            .epsilon(1e-13));
  CHECK(moments(make(1, 1, 1, 1, 2, 25)).i_integral ==
        doctest::Approx(1.7246467881981862).epsilon(1e-12));
  CHECK(moments(make(1, 1, 0.5, 1, 2, 25)).i_integral ==
        doctest::Approx(1.500900980870822).epsilon(1e-12));
  for (double mu : {0.0, 1.0, 5.0}) {
    for (double gamma : {0.0, 0.6, 1.0}) {
      const NetworkParams p = make(1, mu, gamma, 1, 2, 25);
      CHECK(moments(p).i_integral ==
            doctest::Approx(i_integral_by_quadrature(p)).epsilon(1e-9));
    }
  }
  // gamma = 1 makes the i-integral collapse to 3/mu once e^{-2mu/3} dies.
  CHECK(moments(make(1, 100, 1, 1, 2, 25)).i_integral ==
        doctest::Approx(3.0 / 100.0).epsilon(1e-12));
}

TEST_CASE("sigma2: frozen values for the three formula branches") {
  CHECK(moments(make(1, 1, 1, 1, 2, 25)).sigma2 ==
        doctest::Approx(2.9065754307100975).epsilon(1e-10));
  CHECK(moments(make(1, 1, 0.5, 1, 2, 25)).sigma2 ==
        doctest::Approx(2.170886684672888).epsilon(1e-10));
  CHECK(moments(make(1, 2, 0, 1, 2, 25)).sigma2 ==
        doctest::Approx(0.77373472566282198).epsilon(1e-10));
  CHECK(moments(make(0.5, 3, 0.8, 0.7, 3, 40)).sigma2 ==
        doctest::Approx(0.086030741509279529).epsilon(1e-10));
  CHECK(moments(make(0.5, 3, 0.8, 0.7, 3, 40)).mean ==
        doctest::Approx(0.3517069879104105).epsilon(1e-12));
}

TEST_CASE("sigma2 matches 2D quadrature of the defining double integral") {
  for (double gamma : {0.0, 0.5, 1.0}) {
    const NetworkParams p = make(1, 1, gamma, 1, 2, 25);
    const double want =
        oracle::sigma2_quad2d(p.lambda, p.xi, p.p_t, p.mu, gamma, p.alpha,
                              p.half_len);
    CHECK(moments(p).sigma2 == doctest::Approx(want).epsilon(1e-6));
  }
  const NetworkParams q = make(0.7, 4, 0.9, 0.6, 3, 10);
  CHECK(moments(q).sigma2 ==
        doctest::Approx(oracle::sigma2_quad2d(q.lambda, q.xi, q.p_t, q.mu,
                                              q.gamma, q.alpha, q.half_len))
            .epsilon(1e-6));
}

TEST_CASE("moment set identities") {
  for (double mu : {0.0, 0.5, 5.0}) {
    for (double gamma : {0.0, 0.5, 1.0}) {
      const MomentSet ms = moments(make(1.5, mu, gamma, 0.8, 2, 25));
      CHECK(ms.sigma == ms.sigma1 + ms.sigma2);
      CHECK(ms.sigma1 == 0.5 * ms.mean * ms.mean);
      CHECK(ms.variance == ms.second_moment - ms.mean * ms.mean);
      CHECK(ms.variance > 0.0);
      if (mu > 0.0) {
        CHECK(ms.sigma >= ms.mean * ms.mean);
      } else {
        // Without obstacles the cross-user term is mean^2 exactly: the
        // branch computes it from the same product, bit for bit.
        CHECK(ms.sigma == ms.mean * ms.mean);
      }
    }
  }
}

TEST_CASE("limit branches join continuously") {
  const double mean0 = mean_interference(make(1, 0, 1, 1, 2, 25));
  const double mean_eps = mean_interference(make(1, 1e-9, 1, 1, 2, 25));
  CHECK(oracle::rel_err(mean_eps, mean0) < 1e-6);

  const double s2_g0 = moments(make(1, 2, 0, 1, 2, 25)).sigma2;
  const double s2_geps = moments(make(1, 2, 1e-9, 1, 2, 25)).sigma2;
  CHECK(oracle::rel_err(s2_geps, s2_g0) < 1e-5);

  const double s2_mu0 = moments(make(1, 0, 1, 1, 2, 25)).sigma2;
  const double s2_mueps = moments(make(1, 1e-9, 1, 1, 2, 25)).sigma2;
  CHECK(oracle::rel_err(s2_mueps, s2_mu0) < 1e-5);
}

TEST_CASE("opt-in endpoint approximation stays near the exact route") {
  const NetworkParams p = make(1, 4, 1, 1, 2, 25);
  const MomentSet exact = moments(p);
  const MomentSet approx = moments(p, AnalyticOptions{true});
  CHECK(approx.sigma2 != exact.sigma2);  // the flag routes differently
  CHECK(oracle::rel_err(approx.sigma2, exact.sigma2) < 0.02);
  CHECK(oracle::rel_err(rho(p, AnalyticOptions{true}).rho_inf,
                        rho(p).rho_inf) < 0.01);
}

TEST_CASE("cross moments: closed mu = 0 forms and the mode identity") {
  const NetworkParams p = make(1, 0, 1, 1, 2, 25);
  const MomentSet ms = moments(p);
  CHECK(cross_moment(p, MobilityMode::Static) ==
        doctest::Approx(p.lambda * p.xi * p.xi * ms.i_integral +
                        ms.mean * ms.mean)
            .epsilon(1e-14));
  CHECK(cross_moment(p, MobilityMode::IidMobility) ==
        doctest::Approx(ms.mean * ms.mean *
                        (1.0 + 1.0 / (2.0 * p.lambda * p.half_len)))
            .epsilon(1e-14));
  // static - mobile == lambda xi^2 I - sigma / (2 lambda V), exactly.
  for (double mu : {0.0, 1.0, 10.0}) {
    const NetworkParams q = make(2, mu, 1, 0.7, 2, 25);
    const MomentSet m = moments(q);
    const double gap = cross_moment(q, MobilityMode::Static) -
                       cross_moment(q, MobilityMode::IidMobility);
    CHECK(gap == doctest::Approx(q.lambda * q.xi * q.xi * m.i_integral -
                                 m.sigma / (2.0 * q.lambda * q.half_len))
                     .epsilon(1e-10));
  }
}

TEST_CASE("exact correlation: frozen values") {
  const CorrelationResult r1 = rho(make(1, 1, 1, 1, 2, 25));
  CHECK(r1.rho0 == doctest::Approx(0.555014482265487).epsilon(1e-10));
  CHECK(r1.rho_inf == doctest::Approx(0.13782603998843668).epsilon(1e-10));
  CHECK(r1.method == RhoMethod::Exact);

  const CorrelationResult r10 = rho(make(1, 10, 1, 1, 2, 25));
  CHECK(r10.rho0 == doctest::Approx(0.53091038733135798).epsilon(1e-10));
  CHECK(r10.rho_inf == doctest::Approx(0.068045511157231592).epsilon(1e-10));

  // Dense-blockage shorthand 2p/(3+2p) at p = 0.5 is within 5%.
  const double ri5 = rho(make(5, 10, 1, 1, 2, 25)).rho_inf;
  CHECK(ri5 == doctest::Approx(0.252812380885441).epsilon(1e-10));
  CHECK(oracle::rel_err(ri5, 0.25) < 0.05);
}

TEST_CASE("correlation coefficients live in [0, 1]") {
  for (double lambda : {0.1, 1.0, 10.0}) {
    for (double mu : {0.0, 0.5, 5.0}) {
      for (double gamma : {0.0, 0.5, 1.0}) {
        for (double xi : {0.3, 1.0}) {
          const CorrelationResult r = rho(make(lambda, mu, gamma, xi, 2, 25));
          CHECK(r.rho0 >= 0.0);
          CHECK(r.rho0 <= 1.0);
          CHECK(r.rho_inf >= 0.0);
          CHECK(r.rho_inf <= 1.0);
        }
      }
    }
  }
}

TEST_CASE("correlation requires active users") {
  CHECK_THROWS_AS(rho(make(0, 1, 1, 1, 2, 25)), std::domain_error);
}

TEST_CASE("no-blockage closed forms") {
  CHECK(rho_no_blockage(make(1, 0, 1, 0.4, 2, 25)).rho0 ==
        doctest::Approx(0.2).epsilon(1e-15));
  CHECK(rho_no_blockage(make(1, 5, 1, 1, 2, 25)).rho_inf ==
        doctest::Approx(0.057624921998751973).epsilon(1e-14));  // mu ignored
  CHECK(rho_no_blockage(make(1, 0, 1, 0.5, 3, 10)).rho_inf ==
        doctest::Approx(0.046563098438497402).epsilon(1e-14));
  CHECK(rho_no_blockage(make(1, 0, 1, 1, 2, 25)).method ==
        RhoMethod::NoBlockageClosedForm);
  // Matches the fully assembled exact route at mu = 0 to 1e-10.
  for (double a : {2.0, 3.0, 4.0}) {
    for (double V : {10.0, 25.0, 100.0}) {
      for (double xi : {0.2, 0.5, 1.0}) {
        const NetworkParams p = make(1, 0, 1, xi, a, V);
        const CorrelationResult closed = rho_no_blockage(p);
        const CorrelationResult exact = rho(p);
        CHECK(oracle::rel_err(closed.rho0, exact.rho0) < 1e-10);
        CHECK(oracle::rel_err(closed.rho_inf, exact.rho_inf) < 1e-10);
      }
    }
  }
  // Unbounded-domain limit dies out.
  CHECK(rho_no_blockage(make(1, 0, 1, 1, 2, 1e4)).rho_inf <= 1e-3);
}

TEST_CASE("blockage keeps the static coefficient above xi/2") {
  for (double mu : {0.0, 0.5, 1.0, 5.0, 10.0}) {
    for (double lambda : {0.1, 1.0, 10.0}) {
      for (double gamma : {0.0, 0.5, 1.0}) {
        for (double xi : {0.5, 1.0}) {
          const double rho0 = rho(make(lambda, mu, gamma, xi, 2, 25)).rho0;
          CHECK(rho0 >= 0.5 * xi - 1e-12);
        }
      }
    }
  }
}

TEST_CASE("mobile coefficient increases with user density and crosses the "
          "obstacle-free level") {
  const NetworkParams base = make(1, 10, 1, 1, 2, 25);
  double prev = -1.0;
  for (double lambda : {1e-4, 0.01, 0.1, 0.5, 1.0, 5.0, 20.0}) {
    NetworkParams p = base;
    p.lambda = lambda;
    const double ri = rho(p).rho_inf;
    CHECK(ri > prev);
    prev = ri;
  }
  const double floor_level = rho_no_blockage(base).rho_inf;
  NetworkParams lo = base;
  lo.lambda = 1e-4;
  CHECK(rho(lo).rho_inf <= floor_level);
  NetworkParams hi = base;
  hi.lambda = 1e3 * critical_density(base);
  CHECK(rho(hi).rho_inf > floor_level);
}

TEST_CASE("obstacle-free mobile coefficient scales as 1/V") {
  for (double V : {50.0, 100.0, 400.0}) {
    const double r1 = rho_no_blockage(make(1, 0, 1, 1, 2, V)).rho_inf;
    const double r2 = rho_no_blockage(make(1, 0, 1, 1, 2, 2.0 * V)).rho_inf;
    CHECK(r1 / r2 >= 1.9);
    CHECK(r1 / r2 <= 2.1);
  }
}

TEST_CASE("blockage-induced correlation survives large domains") {
  const NetworkParams p = make(1, 1, 1, 1, 2, 1000);
  CHECK(rho(p).rho_inf > 10.0 * rho_no_blockage(p).rho_inf);
}

TEST_CASE("dense-blockage expansion: exact rationals at mu = 10") {
  const CorrelationResult frac = rho_high_mu(make(1, 10, 1, 1, 2, 25));
  CHECK(frac.rho0 == doctest::Approx(0.53125).epsilon(1e-15));
  CHECK(frac.rho_inf == doctest::Approx(0.06875).epsilon(1e-15));
  CHECK(frac.method == RhoMethod::HighMuExpansion);
  const CorrelationResult frac5 = rho_high_mu(make(5, 10, 1, 1, 2, 25));
  CHECK(frac5.rho0 == doctest::Approx(0.625).epsilon(1e-15));
  CHECK(frac5.rho_inf == doctest::Approx(0.255).epsilon(1e-15));

  const CorrelationResult ser = rho_high_mu_series(make(1, 10, 1, 1, 2, 25));
  CHECK(ser.rho0 == doctest::Approx(239.0 / 450.0).epsilon(1e-15));
  CHECK(ser.rho_inf == doctest::Approx(14.0 / 225.0).epsilon(1e-15));
}

TEST_CASE("dense-blockage expansion tracks the exact coefficients at mu=10") {
  for (double lambda : {0.1, 0.2, 0.5, 1.0, 2.0, 5.0}) {
    const NetworkParams p = make(lambda, 10, 1, 1, 2, 25);
    const CorrelationResult exact = rho(p);
    const CorrelationResult approx = rho_high_mu(p);
    CHECK(oracle::rel_err(approx.rho0, exact.rho0) <= 0.05);
    CHECK(oracle::rel_err(approx.rho_inf, exact.rho_inf) <= 0.05);
  }
}

TEST_CASE("expansions increase in the density ratio and join as p -> 0") {
  for (double gamma : {0.0, 0.5, 1.0}) {
    for (double xi : {0.5, 1.0}) {
      double prev0 = -1.0, previ = -1.0;
      for (double p_ratio : {0.001, 0.01, 0.05, 0.1, 0.2}) {
        // Hold lambda = 1 and move mu so w = 1/(2 lambda V) stays fixed.
        const CorrelationResult s =
            rho_high_mu_series(make(1, 1.0 / p_ratio, gamma, xi, 2, 25));
        CHECK(s.rho0 > prev0);
        CHECK(s.rho_inf > previ);
        prev0 = s.rho0;
        previ = s.rho_inf;
      }
      // Leading behavior: rho0 -> xi/2.
      const CorrelationResult tiny =
          rho_high_mu_series(make(1, 1e6, gamma, xi, 2, 25));
      CHECK(tiny.rho0 == doctest::Approx(0.5 * xi).epsilon(1e-5));
    }
  }
  // Series and fractional forms agree once both p and 1/(2 lambda V) are
  // small.
  const NetworkParams p = make(10, 1000, 1, 1, 2, 25);
  const CorrelationResult s = rho_high_mu_series(p);
  const CorrelationResult f = rho_high_mu(p);
  CHECK(oracle::rel_err(s.rho0, f.rho0) < 0.01);
  CHECK(oracle::rel_err(s.rho_inf, f.rho_inf) < 0.01);
}

TEST_CASE("dense-blockage expansion requires obstacles") {
  CHECK_THROWS_AS(rho_high_mu(make(1, 0, 1, 1, 2, 25)), std::domain_error);
  CHECK_THROWS_AS(rho_high_mu_series(make(1, 0, 1, 1, 2, 25)),
                  std::domain_error);
}

TEST_CASE("point engine agrees with the closed center forms") {
  const NetworkParams p = make(1, 2, 0.7, 1, 2, 10);
  const CorrelationResult closed = rho(p);
  const CorrelationResult numeric =
      rho_at_point(p, ObservationPoint::center());
  CHECK(oracle::rel_err(numeric.rho0, closed.rho0) < 1e-6);
  CHECK(oracle::rel_err(numeric.rho_inf, closed.rho_inf) < 1e-6);
}

TEST_CASE("point engine: frozen values from an independent nested oracle") {
  const NetworkParams p = make(1, 2, 0.7, 1, 2, 10);
  const ObservationPoint boundary = ObservationPoint::boundary(10.0);
  const MomentSet mb = moments_at_point(p, boundary);
  CHECK(mb.mean == doctest::Approx(0.65603647626550998).epsilon(1e-8));
  CHECK(mb.sigma == doctest::Approx(0.58660182636200409).epsilon(1e-8));
  const CorrelationResult rb = rho_at_point(p, boundary);
  CHECK(rb.rho0 == doctest::Approx(0.56500594266546422).epsilon(1e-8));
  CHECK(rb.rho_inf == doctest::Approx(0.15442175644778403).epsilon(1e-8));

  const ObservationPoint inner = ObservationPoint::at(3.0, 10.0);
  const MomentSet mi = moments_at_point(p, inner);
  CHECK(mi.mean == doctest::Approx(1.3120714944906586).epsilon(1e-8));
  const CorrelationResult ri = rho_at_point(p, inner);
  CHECK(ri.rho0 == doctest::Approx(0.56500563372039414).epsilon(1e-8));
  CHECK(ri.rho_inf == doctest::Approx(0.17233033039889756).epsilon(1e-8));
}

TEST_CASE("boundary without obstacles: exact halving structure") {
  for (double V : {10.0, 25.0, 100.0}) {
    for (double xi : {0.5, 1.0}) {
      const NetworkParams p = make(1, 0, 1, xi, 2, V);
      const CorrelationResult rb =
          rho_at_point(p, ObservationPoint::boundary(V));
      // Static coefficient keeps the xi/2 law at the boundary.
      CHECK(rb.rho0 == doctest::Approx(0.5 * xi).epsilon(1e-10));
      // The boundary sees one segment of length 2V; its mobile coefficient
      // is the center closed form of a domain with half length 2V.
      NetworkParams doubled = p;
      doubled.half_len = 2.0 * V;
      CHECK(oracle::rel_err(rb.rho_inf,
                            rho_no_blockage(doubled).rho_inf) < 1e-6);
      // The printed boundary form halves the center form exactly; the
      // numeric value sits within a few percent of it (the halving drops
      // the V-dependence of the denominator).
      const double printed = printed_boundary_rho_inf(xi, 2.0, V);
      CHECK(printed / printed_center_rho_inf(xi, 2.0, V) ==
            doctest::Approx(0.5).epsilon(1e-15));
      CHECK(oracle::rel_err(rb.rho_inf, printed) < 0.08);
    }
  }
}

TEST_CASE("printed boundary/center ratio is one half for all parameters") {
  for (double a : {2.0, 3.0, 4.5}) {
    for (double V : {5.0, 25.0, 400.0}) {
      for (double xi : {0.2, 1.0}) {
        CHECK(printed_boundary_rho_inf(xi, a, V) /
                  printed_center_rho_inf(xi, a, V) ==
              doctest::Approx(0.5).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("static coefficient at the boundary is not below the center") {
  for (double mu : {0.5, 2.0, 10.0}) {
    const NetworkParams p = make(1, mu, 1, 1, 2, 10);
    const double center = rho_at_point(p, ObservationPoint::center()).rho0;
    const double boundary =
        rho_at_point(p, ObservationPoint::boundary(10.0)).rho0;
    // The gap is genuinely tiny; allow quadrature-level noise.
    CHECK(boundary >= center - 1e-9);
  }
}

TEST_CASE("observation point must lie inside the segment") {
  CHECK_THROWS_AS(ObservationPoint::at(30.0, 25.0), std::invalid_argument);
  const NetworkParams p = make(1, 1, 1, 1, 2, 25);
  CHECK_THROWS_AS(moments_at_point(p, ObservationPoint{26.0,
                                                       PointKind::General}),
                  std::invalid_argument);
}

TEST_CASE("critical density: frozen roots and the crossing property") {
  const NetworkParams p25 = make(1, 10, 1, 1, 2, 25);
  const double star25 = critical_density(p25);
  CHECK(star25 == doctest::Approx(0.82113142846112075).epsilon(1e-6));
  NetworkParams at_star = p25;
  at_star.lambda = star25;
  CHECK(oracle::rel_err(rho(at_star).rho_inf,
                        rho_no_blockage(p25).rho_inf) < 1e-6);

  const NetworkParams p50 = make(1, 10, 1, 1, 2, 50);
  CHECK(critical_density(p50) ==
        doctest::Approx(0.40786207921774831).epsilon(1e-6));

  CHECK(critical_density_closed_form(p25) ==
        doctest::Approx(90.0 / 94.0).epsilon(1e-15));
  CHECK(critical_density_closed_form(p50) ==
        doctest::Approx(90.0 / 194.0).epsilon(1e-15));

  CHECK_THROWS_AS(critical_density(make(1, 0, 1, 1, 2, 25)),
                  std::domain_error);
  CHECK_THROWS_AS(critical_density_closed_form(make(1, 0, 1, 1, 2, 25)),
                  std::domain_error);
}

TEST_CASE("parameter validation propagates") {
  CHECK_THROWS_AS(mean_interference(make(-1, 0, 1, 1, 2, 25)),
                  std::invalid_argument);
  CHECK_THROWS_AS(moments(make(1, 1, 2, 1, 2, 25)), std::invalid_argument);
  CHECK_THROWS_AS(moments(make(1, 1, 1, 0, 2, 25)), std::invalid_argument);
  CHECK_THROWS_AS(moments(make(1, 1, 1, 1, 1.5, 25)), std::invalid_argument);
  CHECK_THROWS_AS(moments(make(1, 1, 1, 1, 2, 0.5)), std::invalid_argument);
}

}  // TEST_SUITE
