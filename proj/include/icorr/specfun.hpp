#pragma once

#include "icorr/quadrature.hpp"

namespace icorr {

// Generalized exponential integral E_n(z) = integral over t in [1, inf) of
// t^(-n) e^(-z t), for real order n >= 0 and z >= 0.  The integral diverges
// for n <= 1 at z = 0; that input is a domain error.
double exp_integral_en(double n, double z);

// I0 = integral over x in [1, V] of e^(-c x) x^(1-2a) E_a(b x), where
// c = mu (2 - gamma) / 2 and b = mu gamma (3 - 2 gamma) / 6.  This is the
// correlated-obstacle part of the cross-user second moment.  mu = 0 has the
// closed form (1 - V^(2(1-a))) / (2 (a-1)^2) and is returned exactly.
double i0_exact(double a, double mu, double gamma, double V,
                const QuadSpec& spec = {});

// Second-order endpoint approximation of I0 in the V -> infinity limit.
// Requires b > 0, i.e. mu > 0 and gamma > 0; refuses the b = 0 regime,
// which belongs to i0_exact.
double i0_laplace(double a, double mu, double gamma);

namespace detail {

// Quadrature-only evaluation of E_n over the full argument range.  This is
// the correctness reference for the continued-fraction fast path.
double exp_integral_en_quad(double n, double z);

}  // namespace detail

}  // namespace icorr
