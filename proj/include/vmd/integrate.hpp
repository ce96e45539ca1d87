#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace vmd::integrate {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) comp_ += (sum_ - t) + v;
    else comp_ += (v - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double v) { add(v); return *this; }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Integral {
  double value = 0.0;
  /// Estimated absolute error (Gauss-Kronrod difference, roundoff floor included).
  double abserr = 0.0;
  /// int |f| estimate, the magnitude the relative tolerance refers to.
  double resabs = 0.0;
};

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  /// Panels wider than this are split uniformly before adaptive refinement; 0 disables.
  double max_panel = 0.0;
  std::size_t limit = 1000;
};

/// Adaptive Gauss-Kronrod (21 point) integral of f over [a, b], with forced subdivision at
/// `knots` (those outside (a, b) are ignored). Each panel is refined until its error is below
/// max(abs_tol share, rel_tol * int_panel |f|). Throws EvaluationError on a non-finite sample.
Integral adaptive(const std::function<double(double)>& f, double a, double b,
                  std::span<const double> knots = {}, const Options& opts = {});

/// Outcome of summing a signed series a_0 + a_1 + ... whose terms alternate in sign with
/// non-increasing magnitudes.
struct TailSum {
  double value = 0.0;
  /// Certified truncation bound (see `sum_alternating`).
  double bound = 0.0;
  /// Sum of quadrature error estimates of all generated terms.
  double quad_error = 0.0;
  std::size_t terms = 0;
  /// Number of difference levels of the accepted certificate (0 = plain first omitted term).
  int euler_levels = 0;
  bool converged = false;
};

/// Term generator: returns the j-th term and its quadrature error estimate.
using TermFn = std::function<Integral(std::size_t)>;

/// Sums an alternating series with non-increasing magnitudes until the certified remainder bound
/// drops to `tol` or `max_terms` terms have been generated.
///
/// Certificate: with c_j = |a_{N+j}| the remainder is
///   sum_{q<P} Delta^q c_0 / 2^{q+1} + 2^{-P} sum_j (-1)^j Delta^P c_j,
/// and when Delta^P c_j is observed nonnegative and nonincreasing the last sum is bounded by its
/// first term, giving bound Delta^P c_0 / 2^P. P = 0 is the classical first-omitted-term bound.
/// Throws CertificationError when magnitudes fail to decrease over three consecutive terms.
TailSum sum_alternating(const TermFn& term, double tol, std::size_t max_terms);

}  // namespace vmd::integrate
