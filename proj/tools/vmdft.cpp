// vmdft: command-line front end for the transform, taper and verification routines.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "vmd/classify.hpp"
#include "vmd/errors.hpp"
#include "vmd/report.hpp"
#include "vmd/sampled.hpp"
#include "vmd/taper.hpp"
#include "vmd/transform.hpp"
#include "vmd/verify.hpp"

namespace fs = std::filesystem;
using vmd::Json;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2, kNumeric = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string command;
  std::string function;
  std::optional<double> k;
  std::string k_grid;
  std::optional<double> x;
  std::string x_grid;
  std::optional<int> n;
  std::optional<int> m;
  double rel_tol = 1e-8;
  std::size_t max_segments = 1'000'000;
  std::string output;
  std::string format;
  std::string suite = "all";
  double a0 = 0.0, a1 = 0.0, a2 = 0.0;
  int samples = 100;
  std::string side = "right";
};

// "1,2,5" | "a:b:n" (uniform) | "a:b:n:log" (geometric).
std::vector<double> parse_grid(const std::string& spec) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw UsageError("bad number '" + s + "' in grid '" + spec + "'");
    return v;
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    const bool log = parts.size() == 4 && parts[3] == "log";
    if (parts.size() != 3 && !log) throw UsageError("grid '" + spec + "' is not a:b:n or a:b:n:log");
    const double a = number(parts[0]), b = number(parts[1]);
    const double nd = number(parts[2]);
    if (nd < 1 || nd != std::floor(nd)) throw UsageError("grid '" + spec + "' needs a positive integer count");
    if (log && !(a > 0 && b > 0)) throw UsageError("log grid '" + spec + "' needs positive end points");
    const int n = static_cast<int>(nd);
    return log ? vmd::log_grid(a, b, n) : vmd::linear_grid(a, b, n);
  }
  std::vector<double> out;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
  if (out.empty()) throw UsageError("empty grid");
  return out;
}

struct Target {
  vmd::FunctionDescriptor f;
  std::string provenance;
};

Target resolve_function(const std::string& name) {
  if (name.empty()) throw UsageError("--function is required");
  if (vmd::corpus::contains(name)) return {vmd::corpus::get(name), "corpus " + name};
  if (fs::is_regular_file(name)) {
    vmd::SampledFunction s = vmd::load_sampled(name);
    return {s.f, s.provenance()};
  }
  std::string list;
  for (const auto& n : vmd::corpus::names()) list += (list.empty() ? "" : ", ") + n;
  throw UsageError("unknown function '" + name + "' (corpus: " + list + "; or a path to a sampled CSV)");
}

Json config_json(const Config& c) {
  Json j;
  j["command"] = c.command;
  if (!c.function.empty()) j["function"] = c.function;
  if (c.k) j["k"] = *c.k;
  if (!c.k_grid.empty()) j["k_grid"] = c.k_grid;
  if (c.x) j["x"] = *c.x;
  if (!c.x_grid.empty()) j["x_grid"] = c.x_grid;
  if (c.n) j["n"] = *c.n;
  if (c.m) j["m"] = *c.m;
  j["rel_tol"] = c.rel_tol;
  j["max_segments"] = c.max_segments;
  j["format"] = c.format;
  if (c.command == "verify") j["suite"] = c.suite;
  if (c.command == "taper") {
    j["a0"] = c.a0;
    j["a1"] = c.a1;
    j["a2"] = c.a2;
    j["samples"] = c.samples;
    j["side"] = c.side;
  }
  return j;
}

std::string csv_comment(const Config& c, const std::string& provenance) {
  std::string line = "# vmdft " + config_json(c).dump();
  if (!provenance.empty()) line += " | " + provenance;
  return line + "\n";
}

std::vector<double> k_values(const Config& c, const char* fallback) {
  if (c.k && !c.k_grid.empty()) throw UsageError("give --k or --k-grid, not both");
  if (c.k) return {*c.k};
  if (!c.k_grid.empty()) return parse_grid(c.k_grid);
  if (fallback) return parse_grid(fallback);
  throw UsageError("--k or --k-grid is required");
}

std::vector<double> x_values(const Config& c) {
  if (c.x && !c.x_grid.empty()) throw UsageError("give --x or --x-grid, not both");
  if (c.x) return {*c.x};
  if (!c.x_grid.empty()) return parse_grid(c.x_grid);
  throw UsageError("--x or --x-grid is required");
}

// Transform of f at k: conditional integral, or the absolute one of f_m when --m is given.
struct Evaluator {
  std::optional<vmd::PreparedFunction> pf;
  std::optional<vmd::Approximant> fm;
  double rel_tol;
  std::size_t max_segments;

  vmd::TransformResult operator()(double k) const {
    if (fm) return vmd::transform_absolute(*fm, k, rel_tol);
    return vmd::transform_conditional(*pf, k, rel_tol, max_segments);
  }
};

Evaluator make_evaluator(const Config& c, const vmd::FunctionDescriptor& f) {
  Evaluator e{std::nullopt, std::nullopt, c.rel_tol, c.max_segments};
  if (c.m) {
    e.fm = vmd::build_approximant(f, *c.m);
  } else {
    e.pf = vmd::prepare(f);
    if (e.pf->osc.kind != vmd::OscillationKind::non_oscillatory) {
      throw UsageError(f.name + " is " + vmd::to_string(e.pf->osc.kind) +
                       ": the conditional transform needs monotone tails; pass --m to transform the "
                       "approximant f_m instead");
    }
  }
  return e;
}

std::string run_transform(const Config& c, const Target& t, const char* fallback_grid) {
  const auto ks = k_values(c, fallback_grid);
  const Evaluator eval = make_evaluator(c, t.f);
  std::vector<vmd::TransformResult> rs;
  for (double k : ks) rs.push_back(eval(k));

  if (c.format == "csv") {
    std::string out = csv_comment(c, t.provenance) + "k,re,im,abs,tail_bound,quad_error,segments_used\n";
    for (const auto& r : rs) {
      out += vmd::csv_number(r.k) + "," + vmd::csv_number(r.value.real()) + "," +
             vmd::csv_number(r.value.imag()) + "," + vmd::csv_number(std::abs(r.value)) + "," +
             vmd::csv_number(r.tail_bound) + "," + vmd::csv_number(r.quad_error) + "," +
             std::to_string(r.segments_used) + "\n";
    }
    return out;
  }
  Json j;
  j["config"] = config_json(c);
  j["function"] = t.f.name;
  j["provenance"] = t.provenance;
  j["route"] = c.m ? "approximant" : "conditional";
  Json arr = Json::array();
  for (const auto& r : rs) arr.push_back(vmd::to_json(r));
  j["results"] = arr;
  return j.dump(2) + "\n";
}

std::string run_invert(const Config& c, const Target& t) {
  const auto xs = x_values(c);
  const int n = c.n.value_or(16);
  const Evaluator eval = make_evaluator(c, t.f);
  vmd::ComplexFn g = vmd::memoized([&](double k) { return eval(k).value; });

  struct Row {
    double x, re, im, fx;
  };
  std::vector<Row> rows;
  for (double x : xs) {
    auto v = vmd::inverse_transform(g, x, n, c.rel_tol);
    rows.push_back({x, v.real(), v.imag(), t.f(x)});
  }
  if (c.format == "csv") {
    std::string out = csv_comment(c, t.provenance) + "x,re,im,f,abs_error\n";
    for (const auto& r : rows) {
      out += vmd::csv_number(r.x) + "," + vmd::csv_number(r.re) + "," + vmd::csv_number(r.im) + "," +
             vmd::csv_number(r.fx) + "," + vmd::csv_number(std::abs(r.re - r.fx)) + "\n";
    }
    return out;
  }
  Json j;
  j["config"] = config_json(c);
  j["function"] = t.f.name;
  j["provenance"] = t.provenance;
  j["n"] = n;
  j["m_coupled"] = static_cast<long>(std::floor(std::pow(static_cast<double>(n), 1.5)));
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json e;
    e["x"] = vmd::json_number(r.x);
    e["re"] = vmd::json_number(r.re);
    e["im"] = vmd::json_number(r.im);
    e["f"] = vmd::json_number(r.fx);
    e["abs_error"] = vmd::json_number(std::abs(r.re - r.fx));
    arr.push_back(e);
  }
  j["results"] = arr;
  return j.dump(2) + "\n";
}

std::string run_taper(const Config& c) {
  if (!c.m) throw UsageError("taper needs --m");
  if (c.samples < 2) throw UsageError("--samples must be at least 2");
  if (c.side != "right" && c.side != "left") throw UsageError("--side must be right or left");
  const auto side = c.side == "right" ? vmd::Side::right : vmd::Side::left;
  const vmd::TaperPolynomial h = vmd::build_taper(*c.m, c.a0, c.a1, c.a2, side);
  const auto xs = vmd::linear_grid(h.lo(), h.hi(), c.samples);

  if (c.format == "csv") {
    std::string out = csv_comment(c, "") + "x,h,h',h'',h'''\n";
    for (double x : xs) {
      out += vmd::csv_number(x);
      for (int o = 0; o <= 3; ++o) out += "," + vmd::csv_number(h.derivative(o, x));
      out += "\n";
    }
    return out;
  }
  Json j;
  j["config"] = config_json(c);
  j["interval"] = {h.lo(), h.hi()};
  j["sup_bound"] = h.sup_bound();
  j["p_coeffs"] = {h.p_coeffs[0], h.p_coeffs[1], h.p_coeffs[2]};
  Json arr = Json::array();
  for (double x : xs) {
    arr.push_back({vmd::json_number(x), vmd::json_number(h.derivative(0, x)), vmd::json_number(h.derivative(1, x)),
                   vmd::json_number(h.derivative(2, x)), vmd::json_number(h.derivative(3, x))});
  }
  j["columns"] = {"x", "h", "h'", "h''", "h'''"};
  j["samples"] = arr;
  return j.dump(2) + "\n";
}

std::string run_classify(const Config& c, const Target& t) {
  const vmd::PreparedFunction pf = vmd::prepare(t.f);
  if (c.format == "csv") {
    std::string out = csv_comment(c, t.provenance) + "key,value\n";
    out += "decay_class," + vmd::to_string(pf.decay.decay_class) + "\n";
    out += "constant_C," + vmd::csv_number(pf.decay.constant_C) + "\n";
    out += "class_exponent," + std::to_string(pf.decay.class_exponent()) + "\n";
    out += "fitted_exponent," + vmd::csv_number(pf.decay.exponent_p) + "\n";
    out += "oscillation," + vmd::to_string(pf.osc.kind) + "\n";
    out += "core_radius_E," + vmd::csv_number(pf.osc.core_radius_E) + "\n";
    out += "core_max_K," + vmd::csv_number(pf.osc.core_max_K) + "\n";
    out += "delta," + (pf.osc.delta ? vmd::csv_number(*pf.osc.delta) : std::string()) + "\n";
    out += "breakpoints," + std::to_string(pf.osc.breakpoints.size()) + "\n";
    return out;
  }
  Json j;
  j["config"] = config_json(c);
  j["function"] = t.f.name;
  j["provenance"] = t.provenance;
  j["sup_norms_are_lower_bounds"] = t.f.sup_norms_are_lower_bounds;
  j["decay"] = vmd::to_json(pf.decay);
  j["oscillation"] = vmd::to_json(pf.osc);
  return j.dump(2) + "\n";
}

std::string run_verify(const Config& c, const Target& t, bool& passed) {
  vmd::VerificationReport rep = vmd::run_suite(t.f, c.suite, c.rel_tol);
  passed = rep.overall_pass;
  if (c.format == "csv") return csv_comment(c, t.provenance) + vmd::to_csv(rep);
  Json j = vmd::to_json(rep, config_json(c));
  return j.dump(2) + "\n";
}

// Writes via a sibling temporary file and rename, so readers never see a partial file.
void write_atomically(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw UsageError("write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, path);
}

std::optional<fs::path> output_path(const Config& c) {
  if (!c.output.empty()) return fs::path(c.output);
  if (const char* dir = std::getenv("VMDFT_OUTPUT_DIR"); dir && *dir) {
    std::string stem = c.function.empty() ? "taper" : fs::path(c.function).stem().string();
    return fs::path(dir) / (c.command + "-" + stem + "." + c.format);
  }
  return std::nullopt;
}

int dispatch(Config& c) {
  if (!(c.rel_tol > 0.0 && c.rel_tol <= 0.1)) throw UsageError("--rel-tol must lie in (0, 0.1]");
  if (c.max_segments == 0) throw UsageError("--max-segments must be positive");
  if (c.n && *c.n <= 0) throw UsageError("--n must be a positive integer");
  if (c.m && *c.m <= 0) throw UsageError("--m must be a positive integer");
  if (c.format.empty()) c.format = (c.command == "taper" || c.command == "sweep") ? "csv" : "json";
  if (c.format != "csv" && c.format != "json") throw UsageError("--format must be csv or json");

  bool passed = true;
  std::string out;
  if (c.command == "taper") {
    out = run_taper(c);
  } else {
    const Target t = resolve_function(c.function);
    if (c.command == "transform") out = run_transform(c, t, nullptr);
    else if (c.command == "sweep") out = run_transform(c, t, "1:64:64:log");
    else if (c.command == "invert") out = run_invert(c, t);
    else if (c.command == "classify") out = run_classify(c, t);
    else out = run_verify(c, t, passed);
  }

  if (auto path = output_path(c)) write_atomically(*path, out);
  else std::cout << out << std::flush;
  return passed ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier transforms of slowly decaying functions: transforms, inversion, tapers, checks"};
  app.set_config("--config", "", "key = value file; command-line flags take precedence");
  // Keep "1,2,5" grid values whole; the default reader splits unbracketed values on commas.
  auto config_format = std::make_shared<CLI::ConfigTOML>();
  config_format->arrayDelimiter(';');
  app.config_formatter(config_format);
  app.require_subcommand(1, 1);
  app.fallthrough();

  Config c;
  app.add_option("--function", c.function, "corpus name or path to a sampled CSV (x,f[,f1,f2,f3])");
  app.add_option("--k", c.k, "single frequency (k != 0)");
  app.add_option("--k-grid", c.k_grid, "frequencies: 1,2,5 or a:b:n or a:b:n:log");
  app.add_option("--x", c.x, "single evaluation point for invert");
  app.add_option("--x-grid", c.x_grid, "points for invert, same syntax as --k-grid");
  app.add_option("--n", c.n, "inverse transform truncation [-n, n] (default 16)");
  app.add_option("--m", c.m, "approximant index / taper inner endpoint");
  app.add_option("--rel-tol", c.rel_tol, "relative tolerance in (0, 0.1]")->capture_default_str();
  app.add_option("--max-segments", c.max_segments, "cap on tail half-period segments")->capture_default_str();
  app.add_option("--output", c.output, "output file (default: $VMDFT_OUTPUT_DIR/<command>-<function>.<fmt>, else stdout)");
  app.add_option("--format", c.format, "csv or json (default: csv for taper and sweep, json otherwise)");
  app.add_option("--suite", c.suite, "verify suite: all, decay, approximant, convergence, inversion, plancherel, derivative")
      ->capture_default_str();
  app.add_option("--a0", c.a0, "taper value at the inner endpoint");
  app.add_option("--a1", c.a1, "taper first derivative at the inner endpoint");
  app.add_option("--a2", c.a2, "taper second derivative at the inner endpoint");
  app.add_option("--samples", c.samples, "taper sample count")->capture_default_str();
  app.add_option("--side", c.side, "taper side: right or left")->capture_default_str();

  app.add_subcommand("transform", "transform at --k or over --k-grid");
  app.add_subcommand("sweep", "transform over --k-grid (default 1:64:64:log), plot-ready CSV");
  app.add_subcommand("invert", "truncated inverse transform of F(f) at --x/--x-grid");
  app.add_subcommand("taper", "sample the quintic taper for --m, --a0, --a1, --a2");
  app.add_subcommand("classify", "decay class and monotone-piece structure");
  app.add_subcommand("verify", "run a verification suite; exit 1 when a check fails");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    return dispatch(c);
  } catch (const UsageError& e) {
    std::cerr << "vmdft: " << e.what() << "\n";
    return kUsage;
  } catch (const vmd::ParseError& e) {
    std::cerr << "vmdft: " << c.function << ": " << e.what() << "\n";
    return kUsage;
  } catch (const vmd::CapabilityError& e) {
    std::cerr << "vmdft: " << e.what() << "\n";
    return kUsage;
  } catch (const vmd::DomainError& e) {
    std::cerr << "vmdft: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "vmdft: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "vmdft: numerical failure: " << e.what() << "\n";
    return kNumeric;
  }
}
