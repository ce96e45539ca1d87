#include "vmd/transform.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "vmd/errors.hpp"
#include "vmd/integrate.hpp"

namespace vmd {

namespace {

using std::numbers::pi;
using cplx = std::complex<double>;

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * pi);

thread_local TransformRecorder* g_recorder = nullptr;

// Zeros of cos (phase = pi/2) or sin (phase = 0) of |k| y strictly inside (-limit, limit).
std::vector<double> phase_zeros(double half_period, double phase_offset, double limit) {
  std::vector<double> z;
  for (long j = 0;; ++j) {
    double y = phase_offset + j * half_period;
    if (y >= limit) break;
    z.push_back(y);
    if (y != 0.0) z.push_back(-y);
  }
  return z;
}

}  // namespace

double SegmentationPlan::cos_start() const { return 0.5 * half_period + n_k * half_period; }
double SegmentationPlan::sin_start() const { return m_k * half_period; }

SegmentationPlan plan_segments(const OscillationReport& osc, double k, std::size_t max_segments) {
  if (k == 0.0) throw DomainError("plan_segments: the transform is defined for k != 0");
  const double kk = std::abs(k);
  SegmentationPlan p;
  p.core_radius_E = osc.core_radius_E;
  p.K = osc.core_max_K;
  p.half_period = pi / kk;
  p.max_segments = max_segments;
  const double E = p.core_radius_E, hp = p.half_period;

  // Ceiling formulas, then nudged to exact minimality in floating point.
  long n = std::max(0L, static_cast<long>(std::ceil((E - 0.5 * hp) / hp)));
  while (0.5 * hp + n * hp < E) ++n;
  while (n > 0 && 0.5 * hp + (n - 1) * hp >= E) --n;
  p.n_k = n;

  long m = std::max(0L, static_cast<long>(std::ceil(E / hp)));
  while (m * hp < E) ++m;
  while (m > 0 && (m - 1) * hp >= E) --m;
  p.m_k = m;
  return p;
}

TransformResult transform_conditional(const FunctionDescriptor& f, const OscillationReport& osc,
                                      double k, const ConditionalOptions& opts) {
  if (k == 0.0) throw DomainError("transform_conditional: the transform is defined for k != 0");
  if (osc.kind != OscillationKind::non_oscillatory) {
    throw CapabilityError("transform_conditional: " + f.name + " is " + to_string(osc.kind) +
                          "; monotone tails are required. Transform an approximant instead "
                          "(build_approximant + transform_absolute).");
  }
  const SegmentationPlan plan = plan_segments(osc, k, opts.max_segments);
  const double kk = std::abs(k), hp = plan.half_period;
  const double sgn = k > 0 ? 1.0 : -1.0;
  const double a_cos = plan.cos_start(), a_sin = plan.sin_start();

  auto fcos = [&](double y) { return f(y) * std::cos(kk * y); };
  auto fsin = [&](double y) { return f(y) * std::sin(kk * y); };

  integrate::Options qo;
  qo.rel_tol = opts.rel_tol;

  std::vector<double> knots = osc.breakpoints;
  knots.push_back(-plan.core_radius_E);
  knots.push_back(plan.core_radius_E);

  auto cos_knots = phase_zeros(hp, 0.5 * hp, a_cos);
  cos_knots.insert(cos_knots.end(), knots.begin(), knots.end());
  auto sin_knots = phase_zeros(hp, 0.0, a_sin);
  sin_knots.insert(sin_knots.end(), knots.begin(), knots.end());

  const integrate::Integral core_cos = integrate::adaptive(fcos, -a_cos, a_cos, cos_knots, qo);
  const integrate::Integral core_sin = integrate::adaptive(fsin, -a_sin, a_sin, sin_knots, qo);

  // Four tail series; term j covers the j-th half period beyond the start point.
  struct Series {
    std::function<double(double)> integrand;
    double start;
    double direction;
  };
  const std::array<Series, 4> series = {{
      {fcos, a_cos, +1.0},
      {fcos, -a_cos, -1.0},
      {fsin, a_sin, +1.0},
      {fsin, -a_sin, -1.0},
  }};

  auto segment = [&](const Series& s, std::size_t j) {
    double p = s.start + s.direction * (j * hp);
    double q = s.start + s.direction * ((j + 1) * hp);
    return integrate::adaptive(s.integrand, std::min(p, q), std::max(p, q), {}, qo);
  };

  std::array<integrate::Integral, 4> first{};
  double scale = core_cos.resabs + core_sin.resabs;
  for (std::size_t i = 0; i < series.size(); ++i) {
    first[i] = segment(series[i], 0);
    scale += std::abs(first[i].value);
  }
  const double tol = opts.rel_tol * scale / 4.0;

  std::array<integrate::TailSum, 4> tails;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const Series& s = series[i];
    tails[i] = integrate::sum_alternating(
        [&, i](std::size_t j) { return j == 0 ? first[i] : segment(s, j); }, tol,
        opts.max_segments);
  }

  integrate::CompensatedSum c_sum, s_sum;
  c_sum += core_cos.value;
  c_sum += tails[0].value;
  c_sum += tails[1].value;
  s_sum += core_sin.value;
  s_sum += tails[2].value;
  s_sum += tails[3].value;

  TransformResult r;
  r.k = k;
  r.value = kInvSqrt2Pi * cplx(c_sum.value(), -sgn * s_sum.value());
  double bound = 0.0, qerr = core_cos.abserr + core_sin.abserr;
  for (const auto& t : tails) {
    bound += t.bound;
    qerr += t.quad_error;
    r.segments_used += t.terms;
  }
  r.tail_bound = kInvSqrt2Pi * bound;
  r.quad_error = kInvSqrt2Pi * qerr;

  if (opts.decay_constant) {
    const double E = plan.core_radius_E, D = *opts.decay_constant, K = plan.K;
    r.core_bound_Nk = 4.0 * K * E + 4.0 * D * pi / (E * kk) + 4.0 * D * (2.0 / (E * kk) + 1.0 / E);
  }

  if (g_recorder) {
    TransformRecord rec{TransformRecord::Kind::conditional, f, osc, opts, std::nullopt, opts.rel_tol, r};
    record_transform(std::move(rec));
  }
  return r;
}

TransformResult transform_conditional(const PreparedFunction& pf, double k, double rel_tol,
                                      std::size_t max_segments) {
  ConditionalOptions o;
  o.rel_tol = rel_tol;
  o.max_segments = max_segments;
  o.decay_constant = pf.decay.constant_C;
  return transform_conditional(pf.f, pf.osc, k, o);
}

TransformResult transform_absolute(const Approximant& fm, double k, double rel_tol) {
  const double s = fm.support(), md = fm.m;
  const double kk = std::abs(k);
  const std::array<double, 2> knots = {-md, md};

  integrate::Options qo;
  qo.rel_tol = rel_tol;
  if (kk > 1.0) qo.max_panel = pi / kk / 4.0;

  auto re = integrate::adaptive([&](double x) { return fm(x) * std::cos(k * x); }, -s, s, knots, qo);
  auto im = integrate::adaptive([&](double x) { return fm(x) * std::sin(k * x); }, -s, s, knots, qo);

  TransformResult r;
  r.k = k;
  r.value = kInvSqrt2Pi * cplx(re.value, -im.value);
  r.tail_bound = 0.0;
  r.quad_error = kInvSqrt2Pi * (re.abserr + im.abserr);
  if (g_recorder) {
    TransformRecord rec{TransformRecord::Kind::absolute, {}, {}, {}, fm, rel_tol, r};
    record_transform(std::move(rec));
  }
  return r;
}

ComplexFn memoized(ComplexFn g) {
  auto cache = std::make_shared<std::unordered_map<double, cplx>>();
  return [g = std::move(g), cache](double k) {
    auto it = cache->find(k);
    if (it != cache->end()) return it->second;
    cplx v = g(k);
    cache->emplace(k, v);
    return v;
  };
}

cplx inverse_transform(const ComplexFn& g, double x, double n, double rel_tol) {
  const double eps = kInverseEpsilon;
  if (!(n > eps)) throw DomainError("inverse_transform: n must exceed the excluded radius 1e-8");

  ComplexFn gm = memoized([&g](double k) {
    cplx v = g(k);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "inverse_transform: g is non-finite at k = " << k;
      throw EvaluationError(msg.str());
    }
    return v;
  });

  integrate::Options qo;
  if (std::abs(x) > 1.0) qo.max_panel = pi / std::abs(x);

  // One absolute tolerance for both parts, relative to int |g|. A part that vanishes by symmetry
  // is pure noise and cannot meet a tolerance relative to itself.
  integrate::Options coarse = qo;
  coarse.rel_tol = 1.0;
  auto mag = [&](double k) { return std::abs(gm(k)); };
  const double l1 = integrate::adaptive(mag, eps, n, {}, coarse).value +
                    integrate::adaptive(mag, -n, -eps, {}, coarse).value;
  qo.rel_tol = 0.0;
  qo.abs_tol = rel_tol * l1 / 2.0;

  auto re = [&](double k) { return (gm(k) * std::polar(1.0, k * x)).real(); };
  auto im = [&](double k) { return (gm(k) * std::polar(1.0, k * x)).imag(); };

  integrate::CompensatedSum sr, si;
  sr += integrate::adaptive(re, eps, n, {}, qo).value;
  sr += integrate::adaptive(re, -n, -eps, {}, qo).value;
  si += integrate::adaptive(im, eps, n, {}, qo).value;
  si += integrate::adaptive(im, -n, -eps, {}, qo).value;

  // Midpoint patch over (-eps, eps) from the one-sided limits.
  cplx patch = eps * (gm(-eps) + gm(eps));
  return kInvSqrt2Pi * (cplx(sr.value(), si.value()) + patch);
}

std::vector<TransformResult> sweep_conditional(const PreparedFunction& pf, std::span<const double> ks,
                                               double rel_tol, std::size_t max_segments) {
  std::vector<TransformResult> out;
  out.reserve(ks.size());
  for (double k : ks) out.push_back(transform_conditional(pf, k, rel_tol, max_segments));
  return out;
}

TransformRecorder::TransformRecorder() : previous_(g_recorder) { g_recorder = this; }
TransformRecorder::~TransformRecorder() { g_recorder = previous_; }

void record_transform(TransformRecord&& rec) {
  if (g_recorder) g_recorder->records_.push_back(std::move(rec));
}

}  // namespace vmd
