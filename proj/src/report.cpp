#include "vmd/report.hpp"

#include <cmath>
#include <cstdio>

namespace vmd {

Json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json to_json(const TransformResult& r) {
  Json j;
  j["k"] = json_number(r.k);
  j["re"] = json_number(r.value.real());
  j["im"] = json_number(r.value.imag());
  j["abs"] = json_number(std::abs(r.value));
  j["tail_bound"] = json_number(r.tail_bound);
  j["quad_error"] = json_number(r.quad_error);
  j["segments_used"] = r.segments_used;
  if (r.core_bound_Nk) j["core_bound_Nk"] = json_number(*r.core_bound_Nk);
  return j;
}

Json to_json(const DecayReport& d) {
  Json j;
  j["class"] = to_string(d.decay_class);
  j["constant_C"] = json_number(d.constant_C);
  j["class_exponent"] = d.class_exponent();
  j["fitted_exponent"] = json_number(d.exponent_p);
  j["grid_max_abs_x"] = json_number(d.grid_max_abs_x);
  return j;
}

Json to_json(const OscillationReport& o) {
  Json j;
  j["kind"] = to_string(o.kind);
  j["core_radius_E"] = json_number(o.core_radius_E);
  j["core_max_K"] = json_number(o.core_max_K);
  j["delta"] = o.delta ? json_number(*o.delta) : Json();
  Json bp = Json::array();
  for (double b : o.breakpoints) bp.push_back(json_number(b));
  j["breakpoints"] = bp;
  return j;
}

Json to_json(const Check& c) {
  Json j;
  j["name"] = c.name;
  j["pass"] = c.pass;
  j["measured"] = json_number(c.measured);
  j["bound"] = json_number(c.bound);
  j["details"] = c.details;
  return j;
}

Json to_json(const VerificationReport& rep, const Json& config) {
  Json j;
  if (config.is_object()) j["config"] = config;
  j["function"] = rep.function_name;
  Json checks = Json::array();
  for (const auto& c : rep.checks) checks.push_back(to_json(c));
  j["checks"] = checks;
  j["overall_pass"] = rep.overall_pass;
  return j;
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string to_csv(const VerificationReport& rep) {
  std::string out = "name,pass,measured,bound,details\n";
  for (const auto& c : rep.checks) {
    out += csv_field(c.name) + "," + (c.pass ? "true" : "false") + "," + csv_number(c.measured) + "," +
           csv_number(c.bound) + "," + csv_field(c.details) + "\n";
  }
  return out;
}

}  // namespace vmd
