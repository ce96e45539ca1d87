#include "vmd/sampled.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>

#include <gsl/gsl_spline.h>

#include "gsl_support.hpp"
#include "vmd/errors.hpp"

namespace vmd {

namespace {

struct SplineDeleter {
  void operator()(gsl_spline* s) const { gsl_spline_free(s); }
};
using Spline = std::unique_ptr<gsl_spline, SplineDeleter>;

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c); };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& field, int line) {
  double v = 0.0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw ParseError("not a number: '" + field + "'", line);
  }
  if (!std::isfinite(v)) throw ParseError("non-finite value '" + field + "'", line);
  return v;
}

// Slope of log|y| against log|x| on the given samples, skipping zeros.
std::optional<double> fit_exponent(const std::vector<double>& x, const std::vector<double>& y,
                                   std::size_t lo, std::size_t hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    if (y[i] == 0.0 || x[i] == 0.0) continue;
    double lx = std::log(std::abs(x[i])), ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  double den = n * sxx - sx * sx;
  if (n < 2 || den <= 0.0) return std::nullopt;
  return -(n * sxy - sx * sy) / den;
}

// j-th derivative of C |x|^{-p}.
double tail_derivative(const PowerTail& t, int j, double x) {
  double coeff = t.C;
  for (int i = 0; i < j; ++i) coeff *= -t.p - i;
  double v = coeff * std::pow(std::abs(x), -t.p - j);
  return (x < 0.0 && j % 2 == 1) ? -v : v;
}

struct Model {
  std::vector<double> x;
  // splines[c] interpolates column c (0 = f); derivative order j of f is evaluated from
  // column source[j] differentiated order[j] times.
  std::vector<Spline> splines;
  std::array<int, 4> source{};
  std::array<int, 4> order{};
  std::array<bool, 4> available{};
  PowerTail left, right;

  double eval(int j, double xv) const {
    if (xv < x.front()) return tail_derivative(left, j, xv);
    if (xv > x.back()) return tail_derivative(right, j, xv);
    const gsl_spline* s = splines[source[j]].get();
    switch (order[j]) {
      case 0: return gsl_spline_eval(s, xv, nullptr);
      case 1: return gsl_spline_eval_deriv(s, xv, nullptr);
      default: return gsl_spline_eval_deriv2(s, xv, nullptr);
    }
  }
};

}  // namespace

std::string SampledFunction::provenance() const {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "sampled %s: %zu rows on [%.17g, %.17g], natural cubic spline; extrapolated as C/|x|^p "
                "(left C=%.17g p=%.17g, right C=%.17g p=%.17g)",
                f.name.c_str(), rows, x_min, x_max, left.C, left.p, right.C, right.p);
  return buf;
}

SampledFunction load_sampled(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);

  std::vector<std::string> header;
  std::vector<std::vector<double>> cols;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto fields = split(t);
    if (header.empty()) {
      static const std::vector<std::string> full = {"x", "f", "f1", "f2", "f3"};
      bool ok = fields.size() >= 2 && fields.size() <= full.size() &&
                std::equal(fields.begin(), fields.end(), full.begin());
      if (!ok) throw ParseError("header must be x,f optionally followed by f1,f2,f3; got '" + t + "'", lineno);
      header = fields;
      cols.resize(fields.size());
      continue;
    }
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()), lineno);
    }
    for (std::size_t c = 0; c < fields.size(); ++c) cols[c].push_back(parse_number(fields[c], lineno));
    const auto& xs = cols[0];
    if (xs.size() > 1 && !(xs.back() > xs[xs.size() - 2])) {
      throw ParseError("x must be strictly increasing", lineno);
    }
  }
  if (header.empty()) throw ParseError("missing header line", 0);
  const std::size_t n = cols[0].size();
  if (n < 16) throw ParseError("only " + std::to_string(n) + " data rows; at least 16 are required", 0);
  const auto& x = cols[0];
  if (!(x.front() < 0.0 && x.back() > 0.0)) {
    throw ParseError("samples must cover both sides of x = 0 for the tail extrapolation", 0);
  }

  detail::disable_gsl_abort();
  auto model = std::make_shared<Model>();
  model->x = x;
  for (std::size_t c = 1; c < cols.size(); ++c) {
    Spline s(gsl_spline_alloc(gsl_interp_cspline, n));
    gsl_spline_init(s.get(), x.data(), cols[c].data(), n);
    model->splines.push_back(std::move(s));
  }
  // Derivative j comes from the highest column <= j, differentiated the remaining times.
  const int ncols = static_cast<int>(model->splines.size());
  for (int j = 0; j <= 3; ++j) {
    int src = std::min(j, ncols - 1);
    model->source[j] = src;
    model->order[j] = j - src;
    model->available[j] = model->order[j] <= 2;
  }

  // Power-law tails fitted on the outer 20% of each side.
  const auto& fy = cols[1];
  const std::size_t first_pos =
      static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), 0.0) - x.begin());
  const std::size_t n_pos = n - first_pos;
  const std::size_t n_neg = static_cast<std::size_t>(std::lower_bound(x.begin(), x.end(), 0.0) - x.begin());
  auto tail = [&](std::size_t lo, std::size_t hi, std::size_t edge) {
    PowerTail t;
    t.p = fit_exponent(x, fy, lo, hi).value_or(0.0);
    t.C = fy[edge] * std::pow(std::abs(x[edge]), t.p);
    return t;
  };
  const std::size_t k_pos = std::max<std::size_t>(2, (n_pos + 4) / 5);
  const std::size_t k_neg = std::max<std::size_t>(2, (n_neg + 4) / 5);
  model->right = tail(n - std::min(k_pos, n_pos), n, n - 1);
  model->left = tail(0, std::min(k_neg, n_neg), 0);

  SampledFunction out;
  out.rows = n;
  out.columns = header;
  out.x_min = x.front();
  out.x_max = x.back();
  out.left = model->left;
  out.right = model->right;

  FunctionDescriptor& f = out.f;
  f.name = path;
  f.eval = [model](double xv) { return model->eval(0, xv); };
  for (int j = 1; j <= 3; ++j) {
    if (model->available[j]) f.derivs[j - 1] = [model, j](double xv) { return model->eval(j, xv); };
  }
  for (int j = 0; j <= 3; ++j) {
    if (!model->available[j]) continue;
    double sup = 0.0;
    for (double xv : x) sup = std::max(sup, std::abs(model->eval(j, xv)));
    f.sup_norms[j] = sup;
  }
  f.sup_norms_are_lower_bounds = true;
  return out;
}

FunctionDescriptor load_sampled_function(const std::string& path) { return load_sampled(path).f; }

}  // namespace vmd
