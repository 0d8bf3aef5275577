#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "gls/bounds.hpp"
#include "gls/empirics.hpp"
#include "gls/psi.hpp"
#include "gls/verifier.hpp"

namespace gls {

using Json = nlohmann::json;

/// Family descriptors, e.g. {"family":"psi_m","m":2}. Optional "multiplier"
/// and "scale" entries restore the exact factors of a normalised function.
Json to_json(const SlowlyVarying& L);
SlowlyVarying slowly_varying_from_json(const Json& j);
Json to_json(const GeneratingFunction& psi);
GeneratingFunction psi_from_json(const Json& j);

Json to_json(const OperatorTypeSpec& spec);
OperatorTypeSpec operator_type_from_json(const Json& j);

Json to_json(const BoundReport& report);
BoundReport bound_report_from_json(const Json& j);

Json to_json(const ScenarioConfig& config);
/// Missing entries keep their defaults; "kind" is required.
ScenarioConfig scenario_from_json(const Json& j);

Json to_json(const VerificationReport& report);
VerificationReport verification_report_from_json(const Json& j);

/// One value per line with an optional second column of positive weights
/// (rescaled to sum to 1). Blank lines and lines starting with '#' are
/// skipped, as is a non-numeric header line.
EmpiricalSample read_sample_csv(std::istream& in);
/// [x1, x2, ...] or {"values": [...], "weights": [...]}.
EmpiricalSample sample_from_json(const Json& j);
/// By extension: .json is parsed as JSON, anything else as CSV.
EmpiricalSample read_sample_file(const std::string& path);

/// Parses JSON text; malformed input raises ParameterError.
Json parse_json(const std::string& text, const std::string& what);
Json read_json_file(const std::string& path);

/// A number with 12 significant digits ("%.12g").
std::string format_number(double x);

inline constexpr const char* kTableHeader = "p,input_norm,output_norm,bound,ratio";

/// CSV of the report rows: an optional comment line echoing the scenario
/// config, the fixed header, then one row per node.
void emit_table(const VerificationReport& report, std::ostream& out);

}  // namespace gls
