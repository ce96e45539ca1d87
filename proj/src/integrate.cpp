#include "vmd/integrate.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <string>

#include "gsl_support.hpp"
#include "vmd/errors.hpp"

namespace vmd::integrate {

namespace {

std::vector<double> panel_edges(double a, double b, std::span<const double> knots, double max_panel) {
  std::vector<double> pts{a, b};
  for (double k : knots) {
    if (k > a && k < b) pts.push_back(k);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (max_panel <= 0.0) return pts;

  std::vector<double> out{pts.front()};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    double lo = pts[i - 1], hi = pts[i];
    auto pieces = static_cast<long>(std::ceil((hi - lo) / max_panel));
    for (long j = 1; j < pieces; ++j) out.push_back(lo + (hi - lo) * j / pieces);
    out.push_back(hi);
  }
  return out;
}

}  // namespace

Integral adaptive(const std::function<double(double)>& f, double a, double b,
                  std::span<const double> knots, const Options& opts) {
  if (a == b) return {};
  if (b < a) {
    Integral r = adaptive(f, b, a, knots, opts);
    r.value = -r.value;
    return r;
  }
  detail::disable_gsl_abort();

  auto guarded = [&f](double x) {
    double v = f(x);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "non-finite integrand at x = " << x;
      throw EvaluationError(msg.str());
    }
    return v;
  };
  detail::GslCallback<decltype(guarded)> cb(guarded);

  const std::vector<double> edges = panel_edges(a, b, knots, opts.max_panel);
  detail::Workspace work(gsl_integration_workspace_alloc(opts.limit));

  struct Panel {
    double result = 0, abserr = 0, resabs = 0;
  };
  std::vector<Panel> panels(edges.size() - 1);
  for (std::size_t i = 1; i < edges.size(); ++i) {
    Panel& p = panels[i - 1];
    double resasc = 0;
    gsl_integration_qk21(cb.get(), edges[i - 1], edges[i], &p.result, &p.abserr, &p.resabs, &resasc);
    cb.rethrow_if_failed();
  }

  CompensatedSum total;
  Integral out;
  for (std::size_t i = 1; i < edges.size(); ++i) {
    const double lo = edges[i - 1], hi = edges[i];
    Panel& p = panels[i - 1];
    const double tol = std::max(opts.abs_tol * (hi - lo) / (b - a), opts.rel_tol * p.resabs);
    if (p.abserr > tol && tol > 0.0) {
      int status = gsl_integration_qag(cb.get(), lo, hi, tol, opts.rel_tol, opts.limit,
                                       GSL_INTEG_GAUSS21, work.get(), &p.result, &p.abserr);
      cb.rethrow_if_failed();
      // Non-convergence statuses still carry a usable result and an honest error estimate.
      if (status != GSL_SUCCESS && status != GSL_EROUND && status != GSL_EMAXITER &&
          status != GSL_ESING && status != GSL_EDIVERGE && status != GSL_ETOL) {
        throw EvaluationError(std::string("adaptive quadrature failed: ") + gsl_strerror(status));
      }
    }
    total += p.result;
    out.abserr += p.abserr;
    out.resabs += p.resabs;
  }
  out.value = total.value();
  return out;
}

TailSum sum_alternating(const TermFn& term, double tol, std::size_t max_terms) {
  constexpr int kMaxLevels = 8;
  constexpr int kWindow = 3;
  constexpr std::size_t kMinDirect = 2;

  std::vector<double> a, c;
  CompensatedSum quad_err;
  // prefix[N] = a_0 + ... + a_{N-1}, compensated.
  std::vector<double> prefix{0.0};
  CompensatedSum running;

  TailSum best;
  best.bound = std::numeric_limits<double>::infinity();

  auto consider = [&](double value, double bound, int levels) {
    if (bound < best.bound) {
      best.value = value;
      best.bound = bound;
      best.euler_levels = levels;
    }
  };

  std::vector<double> errs;
  while (a.size() < max_terms) {
    const std::size_t j = a.size();
    Integral t = term(j);
    a.push_back(t.value);
    c.push_back(std::abs(t.value));
    errs.push_back(t.abserr);
    quad_err += t.abserr;

    // Plain certificate: a_j is the first omitted term.
    best = TailSum{};
    best.bound = std::numeric_limits<double>::infinity();
    consider(prefix[j], c[j], 0);

    if (j >= 2) {
      double noise = 100.0 * (errs[j] + errs[j - 1] + errs[j - 2]);
      if (c[j - 2] <= c[j - 1] && c[j - 1] <= c[j] && c[j] > noise) {
        std::ostringstream msg;
        msg << "tail segment magnitudes stopped decreasing at segment " << j
            << " (|a| = " << c[j - 2] << ", " << c[j - 1] << ", " << c[j] << ")";
        throw CertificationError(msg.str());
      }
    }
    if (j >= 1 && a[j] != 0.0 && a[j - 1] != 0.0 && (a[j] > 0) == (a[j - 1] > 0) &&
        std::min(c[j], c[j - 1]) > 100.0 * (errs[j] + errs[j - 1])) {
      std::ostringstream msg;
      msg << "tail segments " << j - 1 << " and " << j << " do not alternate in sign";
      throw CertificationError(msg.str());
    }

    // Euler certificates on the trailing window.
    for (int p = 1; p <= kMaxLevels; ++p) {
      const std::size_t need = static_cast<std::size_t>(p + kWindow);
      if (a.size() < kMinDirect + need) break;
      const std::size_t n0 = a.size() - need;
      // diff[q][i] = Delta^q c_{n0+i}
      std::vector<std::vector<double>> diff(p + 2);
      diff[0].assign(c.begin() + static_cast<long>(n0), c.end());
      for (int q = 1; q <= p + 1; ++q) {
        const auto& prev = diff[q - 1];
        if (prev.size() < 2) break;
        diff[q].resize(prev.size() - 1);
        for (std::size_t i = 0; i + 1 < prev.size(); ++i) diff[q][i] = prev[i] - prev[i + 1];
      }
      bool ok = diff[p].size() >= static_cast<std::size_t>(kWindow) &&
                diff[p + 1].size() >= static_cast<std::size_t>(kWindow - 1);
      for (std::size_t i = 0; ok && i < static_cast<std::size_t>(kWindow); ++i) ok = diff[p][i] >= 0.0;
      for (std::size_t i = 0; ok && i + 1 < static_cast<std::size_t>(kWindow); ++i) ok = diff[p + 1][i] >= 0.0;
      if (!ok) continue;

      const double s = a[n0] >= 0.0 ? 1.0 : -1.0;
      double rem = 0.0, scale = 0.5;
      for (int q = 0; q < p; ++q, scale *= 0.5) rem += diff[q][0] * scale;
      consider(prefix[n0] + s * rem, diff[p][0] * std::ldexp(1.0, -p), p);
    }

    running += a[j];
    prefix.push_back(running.value());

    best.terms = a.size();
    best.quad_error = quad_err.value();
    if (best.bound <= tol) {
      best.converged = true;
      return best;
    }
  }
  best.terms = a.size();
  best.quad_error = quad_err.value();
  best.converged = false;
  return best;
}

}  // namespace vmd::integrate
