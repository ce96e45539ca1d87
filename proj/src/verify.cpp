#include "vmd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "vmd/errors.hpp"
#include "vmd/integrate.hpp"
#include "vmd/transform.hpp"

namespace vmd {

namespace {

using std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string list(std::span<const double> v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
  return s + "]";
}

// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double den = n * sxx - sx * sx;
  if (n < 2 || den <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / den;
}

// Fills slope/pass from the collected samples.
void finish_fit(DecayFit& fit, double slack) {
  std::vector<double> rk, rm;
  for (std::size_t i = 0; i < fit.ks.size(); ++i) {
    if (fit.magnitudes[i] > fit.errors[i]) {
      rk.push_back(std::abs(fit.ks[i]));
      rm.push_back(fit.magnitudes[i]);
    }
  }
  if (rk.empty()) {
    fit.slope = -kInf;
    fit.details += "no sample exceeds its certified error; ";
  } else {
    fit.slope = loglog_slope(rk, rm);
  }
  fit.details += "resolved samples " + std::to_string(rk.size()) + "/" + std::to_string(fit.ks.size());
  fit.pass = std::isfinite(fit.fitted_G) && fit.slope <= -fit.target_q + slack;
}

void set_range(DecayFit& fit, std::span<const double> k_grid) {
  if (k_grid.empty()) throw DomainError("decay check: empty k grid");
  fit.k_min = kInf;
  fit.k_max = 0.0;
  for (double k : k_grid) {
    fit.k_min = std::min(fit.k_min, std::abs(k));
    fit.k_max = std::max(fit.k_max, std::abs(k));
  }
}

Check failed(std::string name, const std::exception& e) {
  return Check{std::move(name), false, kInf, 0.0, std::string("could not evaluate: ") + e.what()};
}

}  // namespace

std::vector<double> log_grid(double a, double b, int n) {
  if (n == 1) return {a};
  std::vector<double> g(n);
  const double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i) g[i] = std::exp(la + (lb - la) * i / (n - 1));
  g.front() = a;
  g.back() = b;
  return g;
}

std::vector<double> linear_grid(double a, double b, int n) {
  if (n == 1) return {a};
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
  g.back() = b;
  return g;
}

DecayFit check_transform_decay(const FunctionDescriptor& f, const OscillationReport& osc,
                               std::span<const double> k_grid, double target_q, double rel_tol) {
  DecayFit fit;
  fit.target_q = target_q;
  set_range(fit, k_grid);
  ConditionalOptions opts;
  opts.rel_tol = rel_tol;
  for (double k : k_grid) {
    TransformResult r;
    try {
      r = transform_conditional(f, osc, k, opts);
    } catch (const std::exception& e) {
      fit.fitted_G = kInf;
      fit.slope = std::numeric_limits<double>::quiet_NaN();
      fit.pass = false;
      fit.details = "transform failed at k = " + num(k) + ": " + e.what();
      return fit;
    }
    fit.ks.push_back(k);
    fit.magnitudes.push_back(std::abs(r.value));
    fit.errors.push_back(r.error_bound());
    fit.fitted_G = std::max(fit.fitted_G, std::pow(std::abs(k), target_q) * std::abs(r.value));
  }
  finish_fit(fit, 0.3);
  return fit;
}

DecayFit check_approximant_decay(const Approximant& fm, std::span<const double> k_grid, double rel_tol) {
  if (!fm.C3_const) {
    throw CapabilityError("check_approximant_decay: " + fm.base.name + " has no ||f'''|| so C3 is unknown");
  }
  DecayFit fit;
  fit.target_q = 3.0;
  set_range(fit, k_grid);
  for (double k : k_grid) {
    TransformResult r = transform_absolute(fm, k, rel_tol);
    fit.ks.push_back(k);
    fit.magnitudes.push_back(std::abs(r.value));
    fit.errors.push_back(r.error_bound());
    fit.fitted_G = std::max(fit.fitted_G, std::pow(std::abs(k), 3.0) * std::abs(r.value));
  }
  const double bound = *fm.C3_const * fm.m;
  finish_fit(fit, 0.3);
  fit.details += "; C3*m = " + num(bound);
  fit.pass = fit.pass && fit.fitted_G <= bound;
  return fit;
}

ConvergenceStudy check_uniform_convergence(const FunctionDescriptor& f, std::span<const int> ms,
                                           double k0, std::span<const double> k_grid, double rel_tol) {
  for (double k : k_grid) {
    if (std::abs(k) < k0) throw DomainError("check_uniform_convergence: |k| = " + num(k) + " below k0");
  }
  ConvergenceStudy st;
  st.ms.assign(ms.begin(), ms.end());
  st.k0 = k0;

  const OscillationReport osc = detect_breakpoints(f);
  ConditionalOptions opts;
  opts.rel_tol = rel_tol;
  std::vector<std::complex<double>> exact;
  for (double k : k_grid) exact.push_back(transform_conditional(f, osc, k, opts).value);

  for (int m : ms) {
    const Approximant fm = build_approximant(f, m);
    double sup = 0.0;
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
      sup = std::max(sup, std::abs(exact[i] - transform_absolute(fm, k_grid[i], rel_tol).value));
    }
    st.sup_errors.push_back(sup);
    st.constant_E_k0 = std::max(st.constant_E_k0, m * sup);
  }

  std::vector<double> lm, le;
  for (std::size_t i = 0; i < st.ms.size(); ++i) {
    if (st.sup_errors[i] > 0.0) {
      lm.push_back(st.ms[i]);
      le.push_back(st.sup_errors[i]);
    }
  }
  st.fitted_rate = lm.empty() ? -kInf : loglog_slope(lm, le);

  bool monotone = true;
  for (std::size_t i = 1; i < st.sup_errors.size(); ++i) {
    monotone = monotone && st.sup_errors[i] <= 1.1 * st.sup_errors[i - 1];
  }
  st.pass = monotone && st.fitted_rate <= -0.7;
  st.details = "sup_errors " + list(st.sup_errors) + (monotone ? "" : " (not non-increasing)");
  return st;
}

void VerificationReport::add(Check c) {
  checks.push_back(std::move(c));
  overall_pass = std::all_of(checks.begin(), checks.end(), [](const Check& x) { return x.pass; });
}

void VerificationReport::merge(const VerificationReport& other) {
  for (const auto& c : other.checks) add(c);
}

VerificationReport check_inversion(const FunctionDescriptor& f, std::span<const double> x_grid,
                                   std::span<const int> n_list, double rel_tol) {
  if (x_grid.empty() || n_list.empty()) throw DomainError("check_inversion: empty grid");
  VerificationReport rep;
  rep.function_name = f.name;

  const OscillationReport osc = detect_breakpoints(f);
  ConditionalOptions opts;
  opts.rel_tol = rel_tol;
  double max_err = 0.0, max_mag = 0.0;
  ComplexFn g = memoized([&](double k) {
    TransformResult r = transform_conditional(f, osc, k, opts);
    max_err = std::max(max_err, r.error_bound());
    max_mag = std::max(max_mag, std::abs(r.value));
    return r.value;
  });

  std::vector<double> errs, floors;
  std::string trail;
  for (int n : n_list) {
    const long m = static_cast<long>(std::floor(std::pow(static_cast<double>(n), 1.5)));
    double worst = 0.0;
    for (double x : x_grid) {
      worst = std::max(worst, std::abs(inverse_transform(g, x, n, rel_tol).real() - f(x)));
    }
    // Numerical floor: certified transform error plus the inverse quadrature tolerance, over [-n, n].
    const double floor = 2.0 * n * (max_err + rel_tol * max_mag) / std::sqrt(2.0 * pi);
    errs.push_back(worst);
    floors.push_back(floor);
    trail += (trail.empty() ? "" : ", ") + ("n=" + std::to_string(n)) + " m=" + std::to_string(m) +
             " err=" + num(worst) + " floor=" + num(floor);
  }

  // err_n <= 1.1 err_prev + floor_n, reported as the worst ratio of the two sides.
  double worst_ratio = 0.0;
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double allowed = 1.1 * errs[i - 1] + floors[i];
    worst_ratio = std::max(worst_ratio, allowed > 0.0 ? errs[i] / allowed : (errs[i] > 0.0 ? kInf : 0.0));
  }
  rep.add({"inversion_trend", worst_ratio <= 1.0, worst_ratio, 1.0,
           "max of err_n / (1.1 err_prev + floor_n); " + trail});
  rep.add({"inversion_final", errs.back() <= 1e-2, errs.back(), 1e-2,
           "max |Re F^-1(F f)(x) - f(x)| at n=" + std::to_string(n_list.back())});
  return rep;
}

VerificationReport check_plancherel(const FunctionDescriptor& f, std::span<const double> r_list,
                                    double rel_tol) {
  if (r_list.empty()) throw DomainError("check_plancherel: empty R list");
  VerificationReport rep;
  rep.function_name = f.name;

  const DecayReport decay = classify_decay(f);
  if (decay.decay_class == DecayClass::none) {
    rep.add({"plancherel", false, kInf, 0.0, "f shows no measurable decay; not in L2 by this test"});
    return rep;
  }
  const double X = 1e4;
  const double e = decay.class_exponent(), C = decay.constant_C;
  integrate::Options fo;
  fo.rel_tol = 1e-12;
  fo.limit = 20000;
  const std::array<double, 3> fknots = {-1.0, 0.0, 1.0};
  const integrate::Integral f2 = integrate::adaptive([&](double x) { double v = f(x); return v * v; },
                                                     -X, X, fknots, fo);
  const double f_tail = 2.0 * C * C / ((2.0 * e - 1.0) * std::pow(X, 2.0 * e - 1.0));
  const double norm_f = std::sqrt(std::max(0.0, f2.value));

  const OscillationReport osc = detect_breakpoints(f);
  ConditionalOptions opts;
  opts.rel_tol = rel_tol;
  double max_err = 0.0, max_mag = 0.0;
  ComplexFn g = memoized([&](double k) {
    TransformResult r = transform_conditional(f, osc, k, opts);
    max_err = std::max(max_err, r.error_bound());
    max_mag = std::max(max_mag, std::abs(r.value));
    return r.value;
  });
  auto g2 = [&](double k) { return std::norm(g(k)); };

  std::vector<double> rs(r_list.begin(), r_list.end());
  std::sort(rs.begin(), rs.end());

  // G of the |F| <= G/k^2 envelope, measured with the certified error added.
  double G = 0.0;
  for (double k : log_grid(2.0, std::max(2.0, rs.back()), 64)) {
    for (double s : {-1.0, 1.0}) {
      TransformResult r = transform_conditional(f, osc, s * k, opts);
      G = std::max(G, k * k * (std::abs(r.value) + r.error_bound()));
    }
  }

  integrate::Options ko;
  ko.rel_tol = rel_tol;
  integrate::CompensatedSum F2;
  double F2_err = 0.0, prev = 0.0;
  std::vector<double> gaps, budgets;
  for (double R : rs) {
    auto left = integrate::adaptive(g2, -R, -prev, {}, ko);
    auto right = integrate::adaptive(g2, prev, R, {}, ko);
    F2 += left.value;
    F2 += right.value;
    F2_err += left.abserr + right.abserr;
    prev = R;

    const double norm_F = std::sqrt(std::max(0.0, F2.value()));
    const double F_tail = 2.0 * G * G / (3.0 * R * R * R);
    const double eval_err = 2.0 * R * (2.0 * max_mag * max_err + max_err * max_err);
    const double sq_budget = f2.abserr + f_tail + F2_err + F_tail + eval_err;
    const double sum = norm_f + norm_F;
    const double norm_budget = sum > 0.0 ? std::min(sq_budget / sum, std::sqrt(sq_budget)) : std::sqrt(sq_budget);
    const double gap = std::abs(norm_F - norm_f);
    const double bound = norm_budget + 1e-3 * norm_f;
    gaps.push_back(gap);
    budgets.push_back(norm_budget);
    rep.add({"plancherel_R=" + num(R), gap <= bound, gap, bound,
             "||f||^2 = " + num(f2.value) + ", ||F f||^2 on [-R,R] = " + num(F2.value()) +
                 ", G = " + num(G) + ", k-tail " + num(F_tail) + ", x-tail " + num(f_tail)});
  }
  if (rs.size() > 1) {
    const double lim = gaps.front() + budgets.front();
    rep.add({"plancherel_tightening", gaps.back() <= lim, gaps.back(), lim,
             "gap at largest R against gap plus budget at smallest R"});
  }
  return rep;
}

VerificationReport check_derivative_route(const FunctionDescriptor& f, std::span<const double> k_grid,
                                          double rel_tol) {
  if (!f.has_derivative(1)) throw CapabilityError("check_derivative_route: " + f.name + " has no f'");
  VerificationReport rep;
  rep.function_name = f.name;
  const FunctionDescriptor fp = f.differentiated();
  const OscillationReport osc_f = detect_breakpoints(f);
  OscillationReport osc_fp;
  if (fp.has_derivative(1)) osc_fp = detect_breakpoints(fp);

  ConditionalOptions opts;
  opts.rel_tol = rel_tol;

  if (osc_f.kind == OscillationKind::non_oscillatory && osc_fp.kind == OscillationKind::non_oscillatory) {
    for (double k : k_grid) {
      TransformResult a = transform_conditional(fp, osc_fp, k, opts);
      TransformResult b = transform_conditional(f, osc_f, k, opts);
      const double measured = std::abs(a.value - std::complex<double>(0.0, k) * b.value);
      const double bound = a.error_bound() + std::abs(k) * b.error_bound();
      rep.add({"derivative_identity_k=" + num(k), measured <= bound, measured, bound,
               "|F(f')(k) - ik F(f)(k)| against the summed certified errors"});
    }
    return rep;
  }

  if (osc_fp.kind == OscillationKind::oscillatory && osc_fp.delta) {
    const DecayReport d = classify_decay(fp);
    const double C = fp.sup_norms[0].value_or(0.0);
    const double D = d.constant_C, delta = *osc_fp.delta;
    const double R = 4.0 * pi * (C + D) / delta;
    const std::string consts = "C = " + num(C) + ", D = " + num(D) + ", delta = " + num(delta);
    if (d.class_exponent() < 2 || !fp.sup_norms[0]) {
      rep.add({"derivative_oscillatory_bound", false, kInf, R,
               "f' is not absolutely integrable by measurement or lacks ||f'||; " + consts});
      return rep;
    }
    constexpr int m = 100;
    const Approximant fpm = build_approximant(fp, m);
    // |F(f') - F(f'_m)| <= (int_{|x|>m} |f'| + taper mass) / sqrt(2 pi).
    const double taper_mass = 2.0 / m * std::max(fpm.right_taper.sup_bound(), fpm.left_taper.sup_bound());
    const double budget = (2.0 * D / m + taper_mass) / std::sqrt(2.0 * pi);
    for (double k : k_grid) {
      TransformResult r = transform_absolute(fpm, k, rel_tol);
      const double measured = std::abs(k) * (std::abs(r.value) + r.error_bound() + budget);
      rep.add({"derivative_oscillatory_bound_k=" + num(k), measured <= R, measured, R,
               "|k|(|F(f'_m)| + budget) with m = 100; " + consts});
    }
    return rep;
  }

  rep.add({"derivative_route", false, kInf, 0.0,
           "no applicable route: f is " + to_string(osc_f.kind) + ", f' is " + to_string(osc_fp.kind) +
               (osc_fp.delta ? "" : " without a measured gap")});
  return rep;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> s = {"all", "decay", "approximant", "convergence",
                                             "inversion", "plancherel", "derivative"};
  return s;
}

VerificationReport run_suite(const FunctionDescriptor& f, const std::string& suite, double rel_tol) {
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end()) {
    std::string names;
    for (const auto& s : suite_names()) names += (names.empty() ? "" : ", ") + s;
    throw std::invalid_argument("unknown suite '" + suite + "' (known: " + names + ")");
  }
  const bool all = suite == "all";
  VerificationReport rep;
  rep.function_name = f.name;

  // Hypothesis failures become failed checks; certification and evaluation errors propagate.
  auto guarded = [&](const std::string& name, auto&& body) {
    try {
      body();
    } catch (const CapabilityError& e) {
      rep.add(failed(name, e));
    } catch (const DomainError& e) {
      rep.add(failed(name, e));
    }
  };

  if (all || suite == "decay") {
    guarded("transform_decay", [&] {
      const auto grid = log_grid(2.0, 64.0, 32);
      DecayFit fit = check_transform_decay(f, detect_breakpoints(f), grid, 2.0, rel_tol);
      rep.add({"transform_decay", fit.pass, fit.slope, -2.0 + 0.3,
               "log-log slope of |F f| on [2, 64]; G = " + num(fit.fitted_G) + "; " + fit.details});
    });
  }
  if (all || suite == "approximant") {
    guarded("approximant_decay", [&] {
      const auto grid = log_grid(2.0, 64.0, 64);
      Approximant fm = build_approximant(f, 10);
      DecayFit fit = check_approximant_decay(fm, grid, rel_tol);
      rep.add({"approximant_decay_m=10", fit.pass, fit.fitted_G, *fm.C3_const * fm.m,
               "max |k|^3 |F f_m| on [2, 64], slope " + num(fit.slope) + "; " + fit.details});
    });
  }
  if (all || suite == "convergence") {
    guarded("uniform_convergence", [&] {
      std::vector<double> grid;
      for (double k : log_grid(1.0, 32.0, 24)) {
        grid.push_back(-k);
        grid.push_back(k);
      }
      const std::array<int, 4> ms = {5, 10, 20, 40};
      ConvergenceStudy st = check_uniform_convergence(f, ms, 1.0, grid, rel_tol);
      rep.add({"uniform_convergence", st.pass, st.fitted_rate, -0.7,
               "rate of sup_k |F f - F f_m| in m; E_k0 = " + num(st.constant_E_k0) + "; " + st.details});
    });
  }
  if (all || suite == "inversion") {
    guarded("inversion", [&] {
      const std::array<double, 7> xs = {0.0, -0.5, 0.5, -1.0, 1.0, -3.0, 3.0};
      const std::array<int, 4> ns = {4, 8, 16, 32};
      rep.merge(check_inversion(f, xs, ns, rel_tol));
    });
  }
  if (all || suite == "plancherel") {
    guarded("plancherel", [&] {
      const std::array<double, 3> rs = {8.0, 16.0, 32.0};
      rep.merge(check_plancherel(f, rs, rel_tol));
    });
  }
  if (all || suite == "derivative") {
    guarded("derivative", [&] {
      const FunctionDescriptor fp = f.differentiated();
      const bool osc = fp.has_derivative(1) && detect_breakpoints(fp).kind == OscillationKind::oscillatory;
      std::vector<double> grid = osc ? log_grid(4.0, 64.0, 16)
                                     : std::vector<double>{-5.0, -2.0, -1.0, 1.0, 2.0, 5.0};
      rep.merge(check_derivative_route(f, grid, rel_tol));
    });
  }
  rep.function_name = f.name;
  return rep;
}

}  // namespace vmd
