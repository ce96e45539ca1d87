#include "vmd/function.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gsl_support.hpp"

namespace vmd {

namespace {

using std::numbers::pi;
using cplx = std::complex<double>;

const double kSqrtHalfPi = std::sqrt(pi / 2.0);

// Sup-norms below were computed to 20 digits offline; the slack keeps them upper bounds
// after decimal rounding.
double upper(double v) { return v * (1.0 + 1e-15); }

double sgn(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

}  // namespace

bool FunctionDescriptor::has_derivative(int order) const {
  if (order == 0) return static_cast<bool>(eval);
  if (order < 0 || order > 3) return false;
  return static_cast<bool>(derivs[order - 1]);
}

double FunctionDescriptor::derivative(int order, double x) const {
  if (!has_derivative(order)) {
    throw std::invalid_argument(name + ": derivative of order " + std::to_string(order) +
                                " is not available");
  }
  return order == 0 ? eval(x) : derivs[order - 1](x);
}

FunctionDescriptor FunctionDescriptor::differentiated() const {
  FunctionDescriptor d;
  d.name = name + "'";
  d.eval = derivs[0];
  d.derivs = {derivs[1], derivs[2], RealFn{}};
  d.sup_norms = {sup_norms[1], sup_norms[2], sup_norms[3], std::nullopt};
  if (closed_form_transform) {
    d.closed_form_transform = [g = closed_form_transform](double k) {
      return cplx(0.0, k) * g(k);
    };
  }
  d.analytic_at_infinity = analytic_at_infinity;
  d.sup_norms_are_lower_bounds = sup_norms_are_lower_bounds;
  return d;
}

FunctionDescriptor FunctionDescriptor::scaled(double alpha) const {
  FunctionDescriptor s = *this;
  s.name = std::to_string(alpha) + "*" + name;
  if (eval) s.eval = [alpha, g = eval](double x) { return alpha * g(x); };
  for (auto& d : s.derivs) {
    if (d) d = [alpha, g = d](double x) { return alpha * g(x); };
  }
  for (auto& n : s.sup_norms) {
    if (n) *n *= std::abs(alpha);
  }
  if (closed_form_transform) {
    s.closed_form_transform = [alpha, g = closed_form_transform](double k) { return alpha * g(k); };
  }
  return s;
}

namespace corpus {

FunctionDescriptor runge() {
  FunctionDescriptor f;
  f.name = "runge";
  f.eval = [](double x) { return 1.0 / (1.0 + x * x); };
  f.derivs = {
      [](double x) { double w = 1.0 + x * x; return -2.0 * x / (w * w); },
      [](double x) { double w = 1.0 + x * x; return (6.0 * x * x - 2.0) / (w * w * w); },
      [](double x) {
        double w = 1.0 + x * x;
        return 24.0 * x * (1.0 - x * x) / (w * w * w * w);
      },
  };
  f.sup_norms = {1.0, upper(0.64951905283832898507), 2.0, upper(4.6685592841552130126)};
  f.closed_form_transform = [](double k) { return cplx(kSqrtHalfPi * std::exp(-std::abs(k)), 0.0); };
  f.analytic_at_infinity = true;
  return f;
}

FunctionDescriptor odd_vmd() {
  FunctionDescriptor f;
  f.name = "odd_vmd";
  f.eval = [](double x) { double x2 = x * x; return x * x2 / (1.0 + x2 * x2); };
  f.derivs = {
      [](double x) {
        double x2 = x * x, x4 = x2 * x2, w = 1.0 + x4;
        return x2 * (3.0 - x4) / (w * w);
      },
      [](double x) {
        double x4 = x * x * x * x, w = 1.0 + x4;
        return 2.0 * x * (x4 * x4 - 12.0 * x4 + 3.0) / (w * w * w);
      },
      [](double x) {
        double x4 = x * x * x * x, w = 1.0 + x4;
        return -6.0 * (x4 - 1.0) * (x4 * x4 - 30.0 * x4 + 1.0) / (w * w * w * w);
      },
  };
  f.sup_norms = {upper(0.5698767642386944105), upper(0.8800862965230434597),
                 upper(2.0145930962467709458), upper(11.866304505992796751)};
  // Residues at the lower-half-plane roots of 1+x^4.
  f.closed_form_transform = [](double k) {
    double a = std::abs(k) / std::numbers::sqrt2;
    return cplx(0.0, -kSqrtHalfPi * sgn(k) * std::exp(-a) * std::cos(a));
  };
  f.analytic_at_infinity = true;
  return f;
}

FunctionDescriptor gauss() {
  FunctionDescriptor f;
  f.name = "gauss";
  f.eval = [](double x) { return std::exp(-0.5 * x * x); };
  f.derivs = {
      [](double x) { return -x * std::exp(-0.5 * x * x); },
      [](double x) { return (x * x - 1.0) * std::exp(-0.5 * x * x); },
      [](double x) { return (3.0 * x - x * x * x) * std::exp(-0.5 * x * x); },
  };
  f.sup_norms = {1.0, upper(0.6065306597126334236), 1.0, upper(1.3801190461607491117)};
  f.closed_form_transform = [](double k) { return cplx(std::exp(-0.5 * k * k), 0.0); };
  return f;
}

namespace {

// Derivatives of w(x) = 1/(1+x^2).
struct RungeWeights {
  double w0, w1, w2, w3;
  explicit RungeWeights(double x) {
    double w = 1.0 / (1.0 + x * x);
    w0 = w;
    w1 = -2.0 * x * w * w;
    w2 = (6.0 * x * x - 2.0) * w * w * w;
    w3 = 24.0 * x * (1.0 - x * x) * w * w * w * w;
  }
};

cplx osc_deriv_transform(double k) {
  return cplx(0.0, -0.5 * kSqrtHalfPi * (std::exp(-std::abs(k - 1.0)) - std::exp(-std::abs(k + 1.0))));
}

}  // namespace

FunctionDescriptor osc_deriv() {
  FunctionDescriptor f;
  f.name = "osc_deriv";
  f.eval = [](double x) { return std::sin(x) / (1.0 + x * x); };
  f.derivs = {
      [](double x) {
        RungeWeights w(x);
        return std::cos(x) * w.w0 + std::sin(x) * w.w1;
      },
      [](double x) {
        RungeWeights w(x);
        return -std::sin(x) * w.w0 + 2.0 * std::cos(x) * w.w1 + std::sin(x) * w.w2;
      },
      [](double x) {
        RungeWeights w(x);
        double s = std::sin(x), c = std::cos(x);
        return -c * w.w0 - 3.0 * s * w.w1 + 3.0 * c * w.w2 + s * w.w3;
      },
  };
  f.sup_norms = {upper(0.43741415827900997202), 1.0, upper(1.6915361621298171201), 7.0};
  f.closed_form_transform = osc_deriv_transform;
  f.analytic_at_infinity = false;
  return f;
}

namespace {

// -int_{|x|}^inf sin(t)/(1+t^2) dt; the integrand is odd so the primitive is even.
double osc_prim_value(double x) {
  detail::disable_gsl_abort();
  constexpr std::size_t kLimit = 1000;
  // The moment table is the expensive part of QAWF setup; keep one per thread.
  struct Scratch {
    detail::Workspace work{gsl_integration_workspace_alloc(kLimit)};
    detail::Workspace cycle{gsl_integration_workspace_alloc(kLimit)};
    detail::QawoTable table{gsl_integration_qawo_table_alloc(1.0, 1.0, GSL_INTEG_SINE, 50)};
  };
  thread_local Scratch s;
  auto weight = [](double t) { return 1.0 / (1.0 + t * t); };
  detail::GslCallback<decltype(weight)> cb(weight);
  double result = 0.0, abserr = 0.0;
  gsl_integration_qawf(cb.get(), std::abs(x), 1e-13, kLimit, s.work.get(), s.cycle.get(), s.table.get(),
                       &result, &abserr);
  return -result;
}

}  // namespace

FunctionDescriptor osc_prim() {
  FunctionDescriptor d = osc_deriv();
  FunctionDescriptor f;
  f.name = "osc_prim";
  f.eval = osc_prim_value;
  f.derivs = {d.eval, d.derivs[0], d.derivs[1]};
  // |f| peaks at x = 0 where f(0) = -0.646761122779130071553.
  f.sup_norms = {upper(0.64676112277913007155), d.sup_norms[0], d.sup_norms[1], d.sup_norms[2]};
  f.closed_form_transform = [](double k) {
    return k == 0.0 ? cplx(0.0, 0.0) : osc_deriv_transform(k) / cplx(0.0, k);
  };
  return f;
}

FunctionDescriptor zero() { return constant(0.0); }

FunctionDescriptor constant(double c) {
  FunctionDescriptor f;
  f.name = c == 0.0 ? "zero" : "constant";
  f.eval = [c](double) { return c; };
  f.derivs = {[](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
  f.sup_norms = {std::abs(c), 0.0, 0.0, 0.0};
  if (c == 0.0) f.closed_form_transform = [](double) { return cplx(0.0, 0.0); };
  f.analytic_at_infinity = true;
  return f;
}

const std::vector<std::string>& names() {
  static const std::vector<std::string> kNames = {"runge", "odd_vmd", "gauss", "osc_deriv",
                                                  "osc_prim", "zero"};
  return kNames;
}

bool contains(const std::string& name) {
  for (const auto& n : names()) {
    if (n == name) return true;
  }
  return false;
}

FunctionDescriptor get(const std::string& name) {
  if (name == "runge") return runge();
  if (name == "odd_vmd") return odd_vmd();
  if (name == "gauss") return gauss();
  if (name == "osc_deriv") return osc_deriv();
  if (name == "osc_prim") return osc_prim();
  if (name == "zero") return zero();
  std::string list;
  for (const auto& n : names()) list += (list.empty() ? "" : ", ") + n;
  throw std::out_of_range("unknown function '" + name + "'; corpus: " + list);
}

}  // namespace corpus
}  // namespace vmd
