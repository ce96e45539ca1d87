#pragma once

#include <string>

#include <json.hpp>

#include "vmd/classify.hpp"
#include "vmd/transform.hpp"
#include "vmd/verify.hpp"

namespace vmd {

using Json = nlohmann::ordered_json;

/// A finite value as a JSON number; inf/-inf/nan as strings so nothing degrades to null.
Json json_number(double v);

Json to_json(const TransformResult& r);
Json to_json(const DecayReport& d);
Json to_json(const OscillationReport& o);
Json to_json(const Check& c);

/// { function, checks: [...], overall_pass }, preceded by "config" when `config` is an object.
Json to_json(const VerificationReport& rep, const Json& config = Json());

/// %.17g, the CSV number format.
std::string csv_number(double v);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

/// name,pass,measured,bound,details table (no provenance line).
std::string to_csv(const VerificationReport& rep);

}  // namespace vmd
