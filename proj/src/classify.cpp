#include "vmd/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vmd/errors.hpp"

namespace vmd {

std::string to_string(DecayClass c) {
  switch (c) {
    case DecayClass::very_moderate: return "very_moderate";
    case DecayClass::moderate: return "moderate";
    case DecayClass::faster: return "faster";
    case DecayClass::none: return "none";
  }
  return "none";
}

std::string to_string(OscillationKind k) {
  switch (k) {
    case OscillationKind::non_oscillatory: return "non_oscillatory";
    case OscillationKind::oscillatory: return "oscillatory";
    case OscillationKind::undetermined: return "undetermined";
  }
  return "undetermined";
}

int DecayReport::class_exponent() const {
  return (decay_class == DecayClass::moderate || decay_class == DecayClass::faster) ? 2 : 1;
}

namespace {

double checked(const FunctionDescriptor& f, int order, double x) {
  double v = f.derivative(order, x);
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << f.name << ": non-finite value";
    if (order > 0) msg << " of derivative " << order;
    msg << " at x = " << x;
    throw EvaluationError(msg.str());
  }
  return v;
}

int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

}  // namespace

DecayReport classify_decay(const FunctionDescriptor& f, double grid_max, int grid_points) {
  if (!(grid_max > 1.0)) throw DomainError("classify_decay: grid_max must exceed 1");
  if (grid_points < 3) throw DomainError("classify_decay: need at least 3 grid points");

  std::vector<double> xs(grid_points), fs(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    xs[i] = -grid_max + 2.0 * grid_max * i / (grid_points - 1);
    fs[i] = checked(f, 0, xs[i]);
  }

  // Least squares of log|f| on -log|x|, outer decade only.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int i = 0; i < grid_points; ++i) {
    double ax = std::abs(xs[i]), af = std::abs(fs[i]);
    if (ax < grid_max / 10.0 || af <= 1e-300) continue;
    double u = -std::log(ax), v = std::log(af);
    sx += u; sy += v; sxx += u * u; sxy += u * v;
    ++n;
  }

  DecayReport r;
  r.grid_max_abs_x = grid_max;
  double denom = n * sxx - sx * sx;
  if (n < 2 || denom <= 0.0) {
    r.exponent_p = std::numeric_limits<double>::infinity();
  } else {
    r.exponent_p = (n * sxy - sx * sy) / denom;
  }

  if (r.exponent_p >= 3.0) r.decay_class = DecayClass::faster;
  else if (r.exponent_p >= 2.0 - 0.1) r.decay_class = DecayClass::moderate;
  else if (r.exponent_p >= 1.0 - 0.1) r.decay_class = DecayClass::very_moderate;
  else r.decay_class = DecayClass::none;

  const int e = r.class_exponent();
  double c = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    double ax = std::abs(xs[i]);
    if (ax <= 1.0) continue;
    c = std::max(c, std::pow(ax, e) * std::abs(fs[i]));
  }
  r.constant_C = c;
  return r;
}

OscillationReport detect_breakpoints(const FunctionDescriptor& f, double scan_radius, double step) {
  if (!f.has_derivative(1)) {
    throw CapabilityError("detect_breakpoints: " + f.name + " has no first derivative");
  }
  if (!(scan_radius > 0.0) || !(step > 0.0) || !(step < scan_radius / 10.0)) {
    throw DomainError("detect_breakpoints: need 0 < step < scan_radius/10");
  }

  constexpr double kWidth = 1e-10;
  const long n = static_cast<long>(std::ceil(2.0 * scan_radius / step));
  const double h = 2.0 * scan_radius / n;

  OscillationReport r;
  bool undetermined = false;
  double prev_x = 0.0;
  int prev_sign = 0;
  int zero_run = 0;

  for (long i = 0; i <= n; ++i) {
    double x = -scan_radius + h * i;
    int s = sign_of(checked(f, 1, x));
    if (s == 0) {
      ++zero_run;
      continue;
    }
    if (prev_sign != 0 && s != prev_sign) {
      if (zero_run >= 2) {
        undetermined = true;  // f' vanishes on a whole sub-interval
      } else {
        double lo = prev_x, hi = x, root = 0.5 * (lo + hi);
        while (hi - lo > kWidth) {
          double mid = 0.5 * (lo + hi);
          int sm = sign_of(checked(f, 1, mid));
          if (sm == 0) { lo = hi = mid; break; }
          (sm == prev_sign ? lo : hi) = mid;
        }
        root = 0.5 * (lo + hi);
        r.breakpoints.push_back(root);
      }
    }
    prev_sign = s;
    prev_x = x;
    zero_run = 0;
  }

  double max_abs = 0.0;
  for (double y : r.breakpoints) max_abs = std::max(max_abs, std::abs(y));
  if (r.breakpoints.size() >= 2) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < r.breakpoints.size(); ++i) {
      gap = std::min(gap, r.breakpoints[i] - r.breakpoints[i - 1]);
    }
    r.delta = gap;
  }

  bool outer = max_abs > 0.8 * scan_radius;
  if (undetermined) r.kind = OscillationKind::undetermined;
  else if (!outer) r.kind = OscillationKind::non_oscillatory;
  else r.kind = r.delta ? OscillationKind::oscillatory : OscillationKind::undetermined;

  r.core_radius_E = std::max(1.0, 1.1 * max_abs);
  const int kSamples = 2001;
  double k_max = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    double x = -r.core_radius_E + 2.0 * r.core_radius_E * i / (kSamples - 1);
    k_max = std::max(k_max, std::abs(checked(f, 0, x)));
  }
  for (double y : r.breakpoints) {
    if (std::abs(y) <= r.core_radius_E) k_max = std::max(k_max, std::abs(checked(f, 0, y)));
  }
  r.core_max_K = k_max;
  return r;
}

PreparedFunction prepare(const FunctionDescriptor& f) {
  PreparedFunction p{f, {}, classify_decay(f)};
  if (f.has_derivative(1)) p.osc = detect_breakpoints(f);
  return p;
}

}  // namespace vmd
