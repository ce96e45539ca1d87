#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vmd/function.hpp"

namespace vmd {

enum class DecayClass { very_moderate, moderate, faster, none };
enum class OscillationKind { non_oscillatory, oscillatory, undetermined };

std::string to_string(DecayClass c);
std::string to_string(OscillationKind k);

/// Sampled estimate of the decay class |f(x)| <= C/|x|^p, |x| > 1.
struct DecayReport {
  DecayClass decay_class = DecayClass::none;
  /// C for the class exponent (1 for very_moderate/none, 2 for moderate/faster).
  double constant_C = 0.0;
  /// Least-squares slope of log|f| against -log|x| on the outer decade; +inf when f vanishes there.
  double exponent_p = 0.0;
  double grid_max_abs_x = 0.0;

  /// The exponent the constant refers to.
  int class_exponent() const;
};

/// Monotone-piece structure of f: sign changes of f' and the core radius beyond which f is monotone.
struct OscillationReport {
  std::vector<double> breakpoints;
  OscillationKind kind = OscillationKind::undetermined;
  std::optional<double> delta;
  double core_radius_E = 1.0;
  double core_max_K = 0.0;
};

/// Fits the decay exponent on |x| in [grid_max/10, grid_max] from `grid_points` uniform samples
/// of [-grid_max, grid_max]. Throws DomainError when grid_max <= 1 and EvaluationError on a
/// non-finite sample.
DecayReport classify_decay(const FunctionDescriptor& f, double grid_max = 1000.0,
                           int grid_points = 200001);

/// Scans sign changes of f' on [-scan_radius, scan_radius] with the given step, bisecting each
/// to width 1e-10. Requires f' (CapabilityError otherwise).
OscillationReport detect_breakpoints(const FunctionDescriptor& f, double scan_radius = 100.0,
                                     double step = 1e-2);

/// A function with both reports attached, as the transform routines consume it.
struct PreparedFunction {
  FunctionDescriptor f;
  OscillationReport osc;
  DecayReport decay;
};

PreparedFunction prepare(const FunctionDescriptor& f);

}  // namespace vmd
