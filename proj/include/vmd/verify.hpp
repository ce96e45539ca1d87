#pragma once

#include <span>
#include <string>
#include <vector>

#include "vmd/classify.hpp"
#include "vmd/function.hpp"
#include "vmd/taper.hpp"

namespace vmd {

/// n points from a to b, geometrically spaced (a, b > 0).
std::vector<double> log_grid(double a, double b, int n);
/// n points from a to b inclusive, uniformly spaced.
std::vector<double> linear_grid(double a, double b, int n);

struct DecayFit {
  double k_min = 0.0, k_max = 0.0;
  /// max |k|^q |F(k)| over the grid.
  double fitted_G = 0.0;
  double target_q = 2.0;
  /// Log-log slope over the samples whose |F| exceeds their certified error; -inf when none do.
  double slope = 0.0;
  bool pass = false;
  std::string details;

  std::vector<double> ks;
  std::vector<double> magnitudes;
  std::vector<double> errors;
};

/// Sweeps transform_conditional over k_grid (all |k| >= 1). pass <=> slope <= -q + 0.3 and
/// fitted_G finite; a failing evaluation fails the fit and names the k.
DecayFit check_transform_decay(const FunctionDescriptor& f, const OscillationReport& osc,
                               std::span<const double> k_grid, double target_q,
                               double rel_tol = 1e-8);

/// q = 3 sweep of transform_absolute; pass additionally requires fitted_G <= C3_const * m.
/// Throws CapabilityError when fm has no C3_const.
DecayFit check_approximant_decay(const Approximant& fm, std::span<const double> k_grid,
                                 double rel_tol = 1e-8);

struct ConvergenceStudy {
  std::vector<int> ms;
  /// sup over the grid of |F(f) - F(f_m)|, one per m.
  std::vector<double> sup_errors;
  double k0 = 1.0;
  double fitted_rate = 0.0;
  /// max over m of m * sup_error.
  double constant_E_k0 = 0.0;
  bool pass = false;
  std::string details;
};

ConvergenceStudy check_uniform_convergence(const FunctionDescriptor& f, std::span<const int> ms,
                                           double k0, std::span<const double> k_grid,
                                           double rel_tol = 1e-8);

struct Check {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string details;
};

struct VerificationReport {
  std::string function_name;
  std::vector<Check> checks;
  bool overall_pass = false;

  void add(Check c);
  /// Appends another report's checks and recomputes overall_pass.
  void merge(const VerificationReport& other);
};

/// Inverts transform_conditional(f) on [-n, n] for every n, with m = floor(n^{3/2}) recorded.
/// One check per n plus a trend check (non-increasing within 10%, final error <= 1e-2).
VerificationReport check_inversion(const FunctionDescriptor& f, std::span<const double> x_grid,
                                   std::span<const int> n_list, double rel_tol = 1e-8);

/// ||F(f)||_2 against ||f||_2, with the k-integral truncated at each R in r_list.
VerificationReport check_plancherel(const FunctionDescriptor& f, std::span<const double> r_list,
                                    double rel_tol = 1e-8);

/// F(f') = ik F(f) when f and f' both have monotone tails; the |k| |F(f')| <= 4 pi (C + D) / delta
/// bound when f' oscillates with a detected minimum gap delta.
VerificationReport check_derivative_route(const FunctionDescriptor& f, std::span<const double> k_grid,
                                          double rel_tol = 1e-8);

/// Suites: all, decay, approximant, convergence, inversion, plancherel, derivative.
const std::vector<std::string>& suite_names();

/// Runs a named suite with the default grids. Throws std::invalid_argument for unknown suites.
VerificationReport run_suite(const FunctionDescriptor& f, const std::string& suite,
                             double rel_tol = 1e-8);

}  // namespace vmd
