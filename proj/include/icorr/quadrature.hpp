#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace icorr {

// Tolerances and subdivision budget for adaptive quadrature.
struct QuadSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_subdivisions = 200;
};

// Thrown when the requested tolerance cannot be met within the budget.
// Callers never receive a silent partial result.
class QuadratureError : public std::runtime_error {
 public:
  explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

// Globally adaptive Gauss-Kronrod integration of f over [lo, hi].
// hi may be +infinity; the tail is mapped onto a finite interval first.
// Converges when the total error estimate drops below
// max(abs_tol, rel_tol * |integral|); throws QuadratureError otherwise.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadSpec& spec = {});

}  // namespace icorr
