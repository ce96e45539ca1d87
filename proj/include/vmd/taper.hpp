#pragma once

#include <array>
#include <optional>

#include "vmd/function.hpp"

namespace vmd {

enum class Side { right, left };

/// Smallest inner endpoint accepted by build_taper: sqrt(72/19).
inline constexpr double kTaperMinM = 1.9466570535691505;

/// Degree-5 polynomial h on [m, m+1/m] (right) or [-m-1/m, -m] (left) with
/// h = a0, h' = a1, h'' = a2 at the inner endpoint and a triple zero at the outer one.
///
/// Right frame: h(x) = (x - (m + 1/m))^3 p(x), p(x) = c2 (x-m)^2 + c1 (x-m) + c0.
/// The left taper is the reflection h_left(x) = h_right(-x) of a right taper built from
/// (a0, -a1, a2); `p_coeffs` always describe that right-frame p.
struct TaperPolynomial {
  double m = 0.0;
  Side side = Side::right;
  double a0 = 0.0, a1 = 0.0, a2 = 0.0;
  /// {c0, c1, c2} = {p(m), p'(m), p''(m)/2} in the right frame.
  std::array<double, 3> p_coeffs{};

  double inner() const;  // +-m
  double outer() const;  // +-(m + 1/m)
  double lo() const;     // left end of the taper interval
  double hi() const;     // right end of the taper interval

  /// h^{(order)}(x) for order 0..3; zero outside the interval is *not* applied here.
  double derivative(int order, double x) const;
  double operator()(double x) const { return derivative(0, x); }

  /// Evaluates the (x - (m+1/m))^3 p(x) form directly; same polynomial, kept for cross-checks.
  double eval_factored(double x) const;

  /// 16|a0| + 7|a1| + |a2|, the m-independent bound on |h|.
  double sup_bound() const;
};

/// Throws DomainError when m <= sqrt(72/19).
TaperPolynomial build_taper(double m, double a0, double a1, double a2, Side side = Side::right);

/// f on [-m, m], tapered to zero over [m, m+1/m] and its mirror, zero beyond: a C^2
/// compactly supported approximation of f.
struct Approximant {
  FunctionDescriptor base;
  int m = 0;
  TaperPolynomial right_taper;
  TaperPolynomial left_taper;
  /// 16 ||f|| + 7 ||f'|| + ||f''||.
  double D_const = 0.0;
  /// (2 + 2 ||f'''||) / sqrt(2 pi); absent without ||f'''||.
  std::optional<double> C3_const;

  double support() const;  // m + 1/m
  double derivative(int order, double x) const;
  double operator()(double x) const { return derivative(0, x); }

  /// The approximant as a standalone descriptor (derivatives 1..3, no norms).
  FunctionDescriptor as_function() const;
};

/// Requires f', f'' and the norms ||f||, ||f'||, ||f''||; throws CapabilityError listing what
/// is missing and DomainError for m < 2.
Approximant build_approximant(const FunctionDescriptor& f, int m);

double eval_approximant(const Approximant& fm, double x);

}  // namespace vmd
