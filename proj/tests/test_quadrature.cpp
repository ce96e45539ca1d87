#include <doctest.h>

#include <cmath>
#include <complex>
#include <map>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include "vmd/classify.hpp"
#include "vmd/errors.hpp"
#include "vmd/integrate.hpp"
#include "vmd/taper.hpp"
#include "vmd/transform.hpp"

using namespace vmd;
using cplx = std::complex<double>;

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

double gk(auto f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-14);
}

const PreparedFunction& prepared(const std::string& name) {
  static std::map<std::string, PreparedFunction> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, prepare(corpus::get(name))).first;
  return it->second;
}

}  // namespace

TEST_CASE("plan_segments picks the first zeros past E") {
  OscillationReport osc;
  osc.core_radius_E = 1.3;
  for (double k : {0.1, 0.5, 1.0, 2.4, 7.0, 100.0, -3.0}) {
    SegmentationPlan p = plan_segments(osc, k, 10);
    const double hp = std::numbers::pi / std::abs(k);
    CHECK(p.half_period == doctest::Approx(hp));
    long n = 0;
    while (hp / 2 + n * hp < 1.3) ++n;
    long m = 0;
    while (m * hp < 1.3) ++m;
    CHECK(p.n_k == n);
    CHECK(p.m_k == m);
    CHECK(p.cos_start() >= 1.3);
    CHECK(p.sin_start() >= 1.3);
    CHECK(std::cos(k * p.cos_start()) == doctest::Approx(0.0).scale(1.0));
    CHECK(std::sin(k * p.sin_start()) == doctest::Approx(0.0).scale(1.0));
  }
  CHECK_THROWS_AS(plan_segments(osc, 0.0, 10), DomainError);
}

TEST_CASE("conditional transforms match closed forms within their bounds") {
  for (const char* name : {"runge", "odd_vmd", "gauss"}) {
    const PreparedFunction& pf = prepared(name);
    for (double k : {-7.0, -1.0, 0.3, 1.0, 2.5, 16.0}) {
      CAPTURE(name);
      CAPTURE(k);
      TransformResult r = transform_conditional(pf, k);
      cplx exact = pf.f.closed_form_transform(k);
      CHECK(std::abs(r.value - exact) <= r.error_bound() + 1e-12);
      CHECK(std::abs(r.value - exact) <= 1e-7);
      CHECK(r.k == k);
      CHECK(r.segments_used > 0);
    }
  }
}

TEST_CASE("runge transform is sqrt(pi/2) e^-|k|") {
  const PreparedFunction& pf = prepared("runge");
  for (double k : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    TransformResult r = transform_conditional(pf, k);
    CHECK(r.value.real() == doctest::Approx(std::sqrt(std::numbers::pi / 2) * std::exp(-k)).epsilon(1e-7));
    CHECK(std::abs(r.value.imag()) < 1e-9);
    REQUIRE(r.core_bound_Nk.has_value());
    CHECK(std::abs(r.value) / kInvSqrt2Pi <= *r.core_bound_Nk);
  }
}

TEST_CASE("odd_vmd against an independent Fourier-sine integrator") {
  // For odd f, F(k) = -i sqrt(2/pi) int_0^inf f(y) sin(ky) dy.
  boost::math::quadrature::ooura_fourier_sin<double> sine;
  auto f = [](double y) { return y * y * y / (1 + y * y * y * y); };
  const PreparedFunction& pf = prepared("odd_vmd");
  for (double k : {0.5, 1.0, 3.0, 9.0}) {
    auto [s, err] = sine.integrate(f, k);
    cplx expected(0.0, -std::sqrt(2.0 / std::numbers::pi) * s);
    TransformResult r = transform_conditional(pf, k);
    CHECK(std::abs(r.value - expected) <= r.error_bound() + 1e-9);
    TransformResult neg = transform_conditional(pf, -k);
    CHECK(std::abs(neg.value + r.value) <= r.error_bound() + neg.error_bound());
  }
}

TEST_CASE("real f has conjugate-symmetric transform") {
  FunctionDescriptor skew = corpus::runge();
  skew.name = "shifted";
  skew.eval = [](double x) { return 1.0 / (1.0 + (x - 0.5) * (x - 0.5)); };
  skew.derivs[0] = [](double x) { double d = 1.0 + (x - 0.5) * (x - 0.5); return -2.0 * (x - 0.5) / (d * d); };
  PreparedFunction pf = prepare(skew);
  for (double k : {0.7, 3.0}) {
    TransformResult a = transform_conditional(pf, k), b = transform_conditional(pf, -k);
    CHECK(std::abs(a.value - std::conj(b.value)) <= a.error_bound() + b.error_bound() + 1e-12);
    // Shift theorem against the runge closed form.
    cplx exact = std::exp(cplx(0.0, -k * 0.5)) * std::sqrt(std::numbers::pi / 2) * std::exp(-k);
    CHECK(std::abs(a.value - exact) <= a.error_bound() + 1e-9);
  }
}

TEST_CASE("conditional transform errors") {
  const PreparedFunction& osc = prepared("osc_deriv");
  try {
    transform_conditional(osc, 1.0);
    FAIL("expected CapabilityError");
  } catch (const CapabilityError& e) {
    CHECK(std::string(e.what()).find("transform_absolute") != std::string::npos);
  }
  CHECK_THROWS_AS(transform_conditional(prepared("runge"), 0.0), DomainError);

  // A tail that grows back breaks the alternating-series hypothesis.
  FunctionDescriptor bumpy = corpus::runge();
  bumpy.eval = [](double x) { return 1.0 / (1.0 + x * x) + (std::abs(x) > 30 ? 1e-2 : 0.0); };
  OscillationReport fake = prepared("runge").osc;
  CHECK_THROWS_AS(transform_conditional(bumpy, fake, 1.0), CertificationError);
}

TEST_CASE("transform_absolute agrees with Gauss-Kronrod on the approximant") {
  for (const char* name : {"runge", "osc_deriv", "odd_vmd"}) {
    Approximant fm = build_approximant(corpus::get(name), 6);
    const double m = fm.m, s = fm.support();
    for (double k : {0.0, -1.5, 2.0, 11.0}) {
      CAPTURE(name);
      CAPTURE(k);
      double re = 0.0, im = 0.0;
      for (auto [a, b] : {std::pair{-s, -m}, std::pair{-m, m}, std::pair{m, s}}) {
        re += gk([&](double y) { return fm(y) * std::cos(k * y); }, a, b);
        im -= gk([&](double y) { return fm(y) * std::sin(k * y); }, a, b);
      }
      TransformResult r = transform_absolute(fm, k);
      CHECK(r.tail_bound == 0.0);
      CHECK(std::abs(r.value - cplx(re, im) * kInvSqrt2Pi) <= 1e-9);
    }
  }
}

TEST_CASE("inverse transform recovers the gaussian") {
  ComplexFn g = memoized([](double k) { return cplx(std::exp(-0.5 * k * k), 0.0); });
  for (double x : {0.0, 0.5, -1.0, 3.0}) {
    cplx v = inverse_transform(g, x, 12.0);
    CHECK(v.real() == doctest::Approx(std::exp(-0.5 * x * x)).epsilon(1e-8).scale(1e-8));
    CHECK(std::abs(v.imag()) < 1e-8);
  }
  // An odd transform inverts to i times something real: F(x exp(-x^2/2)) = -ik exp(-k^2/2).
  ComplexFn h = [](double k) { return cplx(0.0, -k * std::exp(-0.5 * k * k)); };
  cplx v = inverse_transform(h, 1.2, 12.0);
  CHECK(v.real() == doctest::Approx(1.2 * std::exp(-0.72)).epsilon(1e-8));
}

TEST_CASE("inverse transform rejects non-finite g") {
  ComplexFn g = [](double k) { return k > 3.0 ? cplx(std::nan(""), 0.0) : cplx(1.0, 0.0); };
  CHECK_THROWS_AS(inverse_transform(g, 0.0, 5.0), EvaluationError);
}

TEST_CASE("memoized evaluates each k once") {
  int calls = 0;
  ComplexFn g = memoized([&](double k) { ++calls; return cplx(k, 0.0); });
  CHECK(g(2.0) == cplx(2.0, 0.0));
  CHECK(g(2.0) == cplx(2.0, 0.0));
  CHECK(g(3.0) == cplx(3.0, 0.0));
  CHECK(calls == 2);
}

TEST_CASE("alternating harmonic series sums to log 2 with an honest bound") {
  auto term = [](std::size_t j) {
    double v = (j % 2 ? -1.0 : 1.0) / static_cast<double>(j + 1);
    return integrate::Integral{v, 0.0, std::abs(v)};
  };
  integrate::TailSum s = integrate::sum_alternating(term, 1e-12, 10000);
  CHECK(s.converged);
  CHECK(std::abs(s.value - std::numbers::ln2) <= s.bound);
  CHECK(s.bound <= 1e-12);
  CHECK(s.terms < 1000);

  integrate::TailSum capped = integrate::sum_alternating(term, 1e-30, 40);
  CHECK_FALSE(capped.converged);
  CHECK(std::abs(capped.value - std::numbers::ln2) <= capped.bound);
}

TEST_CASE("sum_alternating certification failures") {
  auto growing = [](std::size_t j) {
    double v = (j % 2 ? -1.0 : 1.0) * (1.0 + j);
    return integrate::Integral{v, 0.0, std::abs(v)};
  };
  CHECK_THROWS_AS(integrate::sum_alternating(growing, 1e-10, 100), CertificationError);
  auto same_sign = [](std::size_t j) {
    double v = 1.0 / (1.0 + j);
    return integrate::Integral{v, 0.0, v};
  };
  CHECK_THROWS_AS(integrate::sum_alternating(same_sign, 1e-10, 100), CertificationError);
}

TEST_CASE("adaptive quadrature") {
  auto r = integrate::adaptive([](double x) { return std::exp(x); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(std::numbers::e - 1).epsilon(1e-13));
  CHECK(r.abserr <= 1e-10);
  const double knots[] = {0.0};
  auto a = integrate::adaptive([](double x) { return std::abs(x); }, -1.0, 2.0, knots);
  CHECK(a.value == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(a.resabs == doctest::Approx(2.5).epsilon(1e-10));
  CHECK_THROWS_AS(integrate::adaptive([](double x) { return x > 0.3 ? std::nan("") : 1.0; }, 0.0, 1.0), EvaluationError);

  integrate::CompensatedSum cs;
  cs += 1.0;
  cs += 1e-16;
  cs += -1.0;
  CHECK(cs.value() == doctest::Approx(1e-16).epsilon(1e-6));
}

TEST_CASE("transform recorder nests and captures evaluations") {
  const PreparedFunction& pf = prepared("runge");
  TransformRecorder outer;
  transform_conditional(pf, 1.0);
  {
    TransformRecorder inner;
    transform_absolute(build_approximant(pf.f, 5), 2.0);
    REQUIRE(inner.records().size() == 1);
    CHECK(inner.records()[0].kind == TransformRecord::Kind::absolute);
    CHECK(inner.records()[0].fm.has_value());
  }
  transform_conditional(pf, 2.0, 1e-6);
  REQUIRE(outer.records().size() == 2);
  CHECK(outer.records()[0].kind == TransformRecord::Kind::conditional);
  CHECK(outer.records()[1].rel_tol == 1e-6);
  CHECK(outer.records()[1].result.k == 2.0);
}

TEST_CASE("sweep keeps grid order") {
  const double ks[] = {3.0, -1.0, 0.5};
  auto rs = sweep_conditional(prepared("gauss"), ks);
  REQUIRE(rs.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(rs[i].k == ks[i]);
}
