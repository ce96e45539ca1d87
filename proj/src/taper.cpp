#include "vmd/taper.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "vmd/errors.hpp"

namespace vmd {

namespace {

// Derivatives (in t) of w^3 r(t), w = 1 - t, for quadratic r with r(t), r'(t), r''.
std::array<double, 4> cubed_factor_derivs(double t, double r, double r1, double r2) {
  double w = 1.0 - t, w2 = w * w, w3 = w2 * w;
  return {w3 * r, -3.0 * w2 * r + w3 * r1, 6.0 * w * r - 6.0 * w2 * r1 + w3 * r2,
          -6.0 * r + 18.0 * w * r1 - 9.0 * w2 * r2};
}

// Quintic Hermite basis on [0, 1] with a triple zero at t = 1:
//   H0 = w^3 (1 + 3t + 6t^2),  H1 = w^3 (t + 3t^2),  H2 = w^3 t^2 / 2.
// Each is evaluated separately so that the data at t = 0 is reproduced exactly.
double hermite_combination(int order, double t, double b0, double b1, double b2) {
  auto h0 = cubed_factor_derivs(t, 1.0 + 3.0 * t + 6.0 * t * t, 3.0 + 12.0 * t, 12.0);
  auto h1 = cubed_factor_derivs(t, t + 3.0 * t * t, 1.0 + 6.0 * t, 6.0);
  auto h2 = cubed_factor_derivs(t, 0.5 * t * t, t, 1.0);
  return b0 * h0[order] + b1 * h1[order] + b2 * h2[order];
}

}  // namespace

double TaperPolynomial::inner() const { return side == Side::right ? m : -m; }
double TaperPolynomial::outer() const { return side == Side::right ? m + 1.0 / m : -(m + 1.0 / m); }
double TaperPolynomial::lo() const { return side == Side::right ? m : -(m + 1.0 / m); }
double TaperPolynomial::hi() const { return side == Side::right ? m + 1.0 / m : -m; }

double TaperPolynomial::derivative(int order, double x) const {
  if (order < 0 || order > 3) throw DomainError("taper derivative order must be 0..3");
  // Everything is computed in the right frame; reflection flips odd orders.
  double xr = side == Side::right ? x : -x;
  double a1r = side == Side::right ? a1 : -a1;
  // The outer endpoint m + 1/m is not representable; snap its double to t = 1 so the
  // triple zero is reproduced instead of being smeared by the argument rounding.
  double t = xr == m + 1.0 / m ? 1.0 : (xr - m) * m;
  double b1 = a1r / m, b2 = a2 / (m * m);
  double v = hermite_combination(order, t, a0, b1, b2) * std::pow(m, order);
  return (side == Side::left && order % 2 == 1) ? -v : v;
}

double TaperPolynomial::eval_factored(double x) const {
  double xr = side == Side::right ? x : -x;
  double s = xr - m;
  double u = xr - (m + 1.0 / m);
  return u * u * u * ((p_coeffs[2] * s + p_coeffs[1]) * s + p_coeffs[0]);
}

double TaperPolynomial::sup_bound() const {
  return 16.0 * std::abs(a0) + 7.0 * std::abs(a1) + std::abs(a2);
}

TaperPolynomial build_taper(double m, double a0, double a1, double a2, Side side) {
  if (!(m > kTaperMinM)) {
    throw DomainError("build_taper: m = " + std::to_string(m) +
                      " must exceed sqrt(72/19) ~ 1.9467 (threshold for the third-derivative sign argument)");
  }
  TaperPolynomial h;
  h.m = m;
  h.side = side;
  h.a0 = a0;
  h.a1 = a1;
  h.a2 = a2;
  double a1r = side == Side::right ? a1 : -a1;
  double m3 = m * m * m, m4 = m3 * m, m5 = m4 * m;
  double p0 = -a0 * m3;
  double p1 = -3.0 * a0 * m4 - a1r * m3;
  double p2 = -12.0 * a0 * m5 - 6.0 * a1r * m4 - a2 * m3;
  h.p_coeffs = {p0, p1, 0.5 * p2};
  return h;
}

double Approximant::support() const { return m + 1.0 / m; }

double Approximant::derivative(int order, double x) const {
  const double ax = std::abs(x);
  if (ax <= m) {
    if (!base.has_derivative(order)) {
      throw CapabilityError(base.name + ": approximant needs derivative " + std::to_string(order));
    }
    return base.derivative(order, x);
  }
  if (ax >= support()) return 0.0;
  return (x > 0 ? right_taper : left_taper).derivative(order, x);
}

FunctionDescriptor Approximant::as_function() const {
  FunctionDescriptor d;
  d.name = base.name + "_m" + std::to_string(m);
  d.eval = [self = *this](double x) { return self.derivative(0, x); };
  for (int j = 1; j <= 3; ++j) {
    if (base.has_derivative(j)) {
      d.derivs[j - 1] = [self = *this, j](double x) { return self.derivative(j, x); };
    }
  }
  return d;
}

Approximant build_approximant(const FunctionDescriptor& f, int m) {
  if (m < 2) throw DomainError("build_approximant: m must be an integer >= 2");
  std::string missing;
  auto need = [&](bool ok, const char* what) {
    if (!ok) missing += (missing.empty() ? "" : ", ") + std::string(what);
  };
  need(static_cast<bool>(f.eval), "f");
  need(f.has_derivative(1), "f'");
  need(f.has_derivative(2), "f''");
  need(f.sup_norms[0].has_value(), "||f||");
  need(f.sup_norms[1].has_value(), "||f'||");
  need(f.sup_norms[2].has_value(), "||f''||");
  if (!missing.empty()) {
    throw CapabilityError("build_approximant: " + f.name + " lacks " + missing);
  }

  const double md = m;
  Approximant a;
  a.base = f;
  a.m = m;
  a.right_taper = build_taper(md, f(md), f.derivative(1, md), f.derivative(2, md), Side::right);
  a.left_taper = build_taper(md, f(-md), f.derivative(1, -md), f.derivative(2, -md), Side::left);
  a.D_const = 16.0 * *f.sup_norms[0] + 7.0 * *f.sup_norms[1] + *f.sup_norms[2];
  if (f.sup_norms[3]) {
    a.C3_const = (2.0 + 2.0 * *f.sup_norms[3]) / std::sqrt(2.0 * std::numbers::pi);
  }
  return a;
}

double eval_approximant(const Approximant& fm, double x) { return fm.derivative(0, x); }

}  // namespace vmd
