#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vmd/function.hpp"

namespace vmd {

/// f(x) = C / |x|^p beyond one end of the sample range, continuous with the last sample.
struct PowerTail {
  double C = 0.0;
  double p = 0.0;
};

struct SampledFunction {
  FunctionDescriptor f;
  PowerTail left, right;
  std::size_t rows = 0;
  std::vector<std::string> columns;
  double x_min = 0.0, x_max = 0.0;

  /// One-line description of the interpolation and extrapolation, for output provenance.
  std::string provenance() const;
};

/// Reads a CSV with header `x,f` optionally followed by `f1`, `f2`, `f3` (derivative columns).
/// Lines starting with '#' and blank lines are skipped. Requires at least 16 rows, strictly
/// increasing x, and samples on both sides of 0. Inside the range the columns are natural cubic
/// splines (a missing derivative column is the derivative of the next lower spline; f''' is only
/// available from an f2 or f3 column). Outside, each side follows C/|x|^p with p fitted on the
/// outer 20% of that side's samples and C matched to the end sample.
///
/// Sup-norms are sampled maxima, flagged via sup_norms_are_lower_bounds. Throws ParseError.
SampledFunction load_sampled(const std::string& path);

FunctionDescriptor load_sampled_function(const std::string& path);

}  // namespace vmd
