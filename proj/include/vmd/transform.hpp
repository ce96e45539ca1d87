#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "vmd/classify.hpp"
#include "vmd/function.hpp"
#include "vmd/taper.hpp"

namespace vmd {

/// A unitary transform value (2 pi)^{-1/2} int f(y) e^{-iky} dy at one frequency.
struct TransformResult {
  double k = 0.0;
  std::complex<double> value;
  /// Certified bound on the truncation of the infinite integral (0 for compact support).
  double tail_bound = 0.0;
  /// Estimated quadrature error of everything that was integrated.
  double quad_error = 0.0;
  std::size_t segments_used = 0;
  /// 4KE + 4D pi/(E|k|) + 4D(2/(E|k|) + 1/E), an a-priori bound on sqrt(2 pi)|value|.
  std::optional<double> core_bound_Nk;

  double error_bound() const { return tail_bound + quad_error; }
};

/// Where the alternating tail series begin for a given frequency.
struct SegmentationPlan {
  double core_radius_E = 1.0;
  double K = 0.0;
  double half_period = 0.0;
  /// Least n >= 0 with pi/(2|k|) + n pi/|k| >= E (first cosine zero past E).
  long n_k = 0;
  /// Least n >= 0 with n pi/|k| >= E (first sine zero past E).
  long m_k = 0;
  std::size_t max_segments = 1;

  double cos_start() const;
  double sin_start() const;
};

SegmentationPlan plan_segments(const OscillationReport& osc, double k, std::size_t max_segments);

struct ConditionalOptions {
  double rel_tol = 1e-8;
  std::size_t max_segments = 1'000'000;
  /// D with |f(x)| <= D/|x| beyond the core; enables core_bound_Nk.
  std::optional<double> decay_constant;
};

/// Conditionally convergent transform of a function with monotone tails, by half-period
/// segmentation of the four tail integrals (cos/sin, left/right).
///
/// Throws DomainError for k = 0, CapabilityError unless osc.kind is non_oscillatory, and
/// CertificationError when tail segments stop decreasing.
TransformResult transform_conditional(const FunctionDescriptor& f, const OscillationReport& osc,
                                      double k, const ConditionalOptions& opts = {});

/// Convenience overload: decay constant taken from the prepared decay report.
TransformResult transform_conditional(const PreparedFunction& pf, double k,
                                      double rel_tol = 1e-8,
                                      std::size_t max_segments = 1'000'000);

/// Proper integral of a compactly supported approximant; tail_bound is 0. Any k is allowed.
TransformResult transform_absolute(const Approximant& fm, double k, double rel_tol = 1e-8);

/// Half-width of the excluded neighbourhood of k = 0 in the inverse transform.
inline constexpr double kInverseEpsilon = 1e-8;

/// (2 pi)^{-1/2} int_{-n}^{n} g(k) e^{ikx} dk, with (-eps, eps) replaced by a midpoint patch
/// built from g(+-eps). Throws EvaluationError when g is non-finite at some k.
std::complex<double> inverse_transform(const ComplexFn& g, double x, double n, double rel_tol = 1e-8);

/// Wraps g with a cache keyed by exact k, so repeated inverse transforms over the same frequency
/// nodes (different x, same n) evaluate g once. Not thread-safe.
ComplexFn memoized(ComplexFn g);

/// Evaluates transform_conditional over a grid. Results are in grid order.
std::vector<TransformResult> sweep_conditional(const PreparedFunction& pf, std::span<const double> ks,
                                               double rel_tol = 1e-8,
                                               std::size_t max_segments = 1'000'000);

/// Observer hook: while a TransformRecorder is alive on the current thread, every transform
/// evaluation is appended to it together with what is needed to replay it.
struct TransformRecord {
  enum class Kind { conditional, absolute } kind;
  FunctionDescriptor f;             // conditional only
  OscillationReport osc;            // conditional only
  ConditionalOptions conditional;   // conditional only
  std::optional<Approximant> fm;    // absolute only
  double rel_tol = 0.0;
  TransformResult result;
};

class TransformRecorder {
 public:
  TransformRecorder();
  ~TransformRecorder();
  TransformRecorder(const TransformRecorder&) = delete;
  TransformRecorder& operator=(const TransformRecorder&) = delete;

  const std::vector<TransformRecord>& records() const { return records_; }

 private:
  friend void record_transform(TransformRecord&&);
  TransformRecorder* previous_;
  std::vector<TransformRecord> records_;
};

void record_transform(TransformRecord&& rec);

}  // namespace vmd
