#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace vmd {

using RealFn = std::function<double(double)>;
using ComplexFn = std::function<std::complex<double>(double)>;

/// A real test function together with whatever analytic metadata is known about it.
///
/// `derivs[0]` is f' , `derivs[1]` is f'' , `derivs[2]` is f'''; an empty std::function
/// means the derivative is not available. `sup_norms[j]` bounds the j-th derivative
/// (j = 0 is f itself). Descriptors are immutable values; copy freely.
struct FunctionDescriptor {
  std::string name;
  RealFn eval;
  std::array<RealFn, 3> derivs;
  std::array<std::optional<double>, 4> sup_norms;
  /// Closed-form unitary transform (2 pi)^{-1/2} int f(y) e^{-iky} dy, when known.
  ComplexFn closed_form_transform;
  /// Corpus metadata only; never inferred.
  bool analytic_at_infinity = false;
  /// Set for sampled functions, whose sup-norms are sampled maxima rather than bounds.
  bool sup_norms_are_lower_bounds = false;

  double operator()(double x) const { return eval(x); }

  /// Order 0 is f itself; orders 1..3 consult `derivs`.
  bool has_derivative(int order) const;
  double derivative(int order, double x) const;

  /// Descriptor of f' built by shifting derivatives and norms down one order.
  /// The transform oracle, when present, becomes ik F(f)(k).
  FunctionDescriptor differentiated() const;

  /// alpha * f, with norms and oracle scaled by |alpha| / alpha.
  FunctionDescriptor scaled(double alpha) const;
};

namespace corpus {

/// Names accepted by `get`, in registry order.
const std::vector<std::string>& names();

bool contains(const std::string& name);

/// Throws std::out_of_range listing the registry when `name` is unknown.
FunctionDescriptor get(const std::string& name);

FunctionDescriptor runge();      // 1/(1+x^2)
FunctionDescriptor odd_vmd();    // x^3/(1+x^4)
FunctionDescriptor gauss();      // exp(-x^2/2)
FunctionDescriptor osc_deriv();  // sin(x)/(1+x^2)
FunctionDescriptor osc_prim();   // antiderivative of osc_deriv vanishing at -inf
FunctionDescriptor zero();
FunctionDescriptor constant(double c);

}  // namespace corpus
}  // namespace vmd
