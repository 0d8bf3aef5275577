#include "gls/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gls/error.hpp"

namespace gls {

namespace {

const Json& require(const Json& j, const char* key, const std::string& context) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParameterError(context + ": missing required entry \"" + key + "\"");
  }
  return j.at(key);
}

double number(const Json& j, const char* key, const std::string& context) {
  const auto& v = require(j, key, context);
  if (v.is_string() && (v == "inf" || v == "infinity")) return kInfinity;
  if (!v.is_number()) throw ParameterError(context + ": entry \"" + key + "\" must be a number");
  return v.get<double>();
}

double number_or(const Json& j, const char* key, double fallback, const std::string& context) {
  return j.contains(key) ? number(j, key, context) : fallback;
}

std::vector<double> numbers(const Json& j, const std::string& context) {
  if (!j.is_array()) throw ParameterError(context + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw ParameterError(context + " must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::size_t count(const Json& j, const char* key, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ParameterError(std::string("scenario entry \"") + key + "\" must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

Json bound_to_json(double b) { return std::isfinite(b) ? Json(b) : Json("inf"); }

}  // namespace

Json to_json(const SlowlyVarying& L) {
  if (L.kind == SlowlyVarying::Kind::LogPower) return {{"kind", "log_power"}, {"r", L.value}};
  return {{"kind", "constant"}, {"c", L.value}};
}

SlowlyVarying slowly_varying_from_json(const Json& j) {
  const std::string context = "slowly varying function";
  const auto& kind = require(j, "kind", context);
  if (kind == "log_power") return SlowlyVarying::log_power(number(j, "r", context));
  if (kind == "constant") return SlowlyVarying::constant(number_or(j, "c", 1.0, context));
  throw ParameterError("unknown slowly varying kind " + kind.dump() + " (expected log_power or constant)");
}

Json to_json(const GeneratingFunction& psi) {
  Json j;
  j["family"] = family_name(psi.family());
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PsiMParams>) {
          j["m"] = f.m;
        } else if constexpr (std::is_same_v<T, PsiMLParams>) {
          j["m"] = f.m;
          j["L"] = to_json(f.L);
        } else if constexpr (std::is_same_v<T, PsiBGammaLParams>) {
          j["b"] = f.b;
          j["gamma"] = f.gamma;
          j["L"] = to_json(f.L);
        } else if constexpr (std::is_same_v<T, DegenerateParams>) {
          j["r"] = f.r;
        } else if constexpr (std::is_same_v<T, PsiBBetaParams>) {
          j["b"] = f.b;
          j["beta"] = f.beta;
        } else if constexpr (std::is_same_v<T, TabulatedParams>) {
          j["grid"] = f.grid;
          j["values"] = f.values;
        } else {
          j["base"] = to_json(*f.base);
          j["delta"] = f.delta;
        }
      },
      psi.params());
  if (psi.multiplier() != 1.0) j["multiplier"] = psi.multiplier();
  if (psi.scale() != 1.0) j["scale"] = psi.scale();
  return j;
}

GeneratingFunction psi_from_json(const Json& j) {
  const std::string context = "family descriptor";
  const auto& family = require(j, "family", context);
  if (!family.is_string()) throw ParameterError("family descriptor: \"family\" must be a string");
  const auto name = family.get<std::string>();
  auto L = [&] { return j.contains("L") ? slowly_varying_from_json(j.at("L")) : SlowlyVarying::constant(1.0); };

  auto psi = [&]() -> GeneratingFunction {
    if (name == "psi_m") return GeneratingFunction::psi_m(number(j, "m", context));
    if (name == "psi_m_l") return GeneratingFunction::psi_ml(number(j, "m", context), L());
    if (name == "psi_b_gamma_l") {
      return GeneratingFunction::psi_b_gamma_l(number(j, "b", context), number(j, "gamma", context), L());
    }
    if (name == "degenerate") return GeneratingFunction::degenerate(number(j, "r", context));
    if (name == "psi_b_beta") {
      return GeneratingFunction::psi_b_beta(number(j, "b", context), number(j, "beta", context));
    }
    if (name == "tabulated") {
      return GeneratingFunction::tabulated(numbers(require(j, "grid", context), "tabulated grid"),
                                           numbers(require(j, "values", context), "tabulated values"));
    }
    if (name == "power_weighted") {
      return GeneratingFunction::power_weighted(psi_from_json(require(j, "base", context)),
                                                number(j, "delta", context));
    }
    throw ParameterError("unknown family \"" + name +
                         "\" (expected psi_m, psi_m_l, psi_b_gamma_l, degenerate, psi_b_beta, tabulated or "
                         "power_weighted)");
  }();
  if (j.contains("multiplier") || j.contains("scale")) {
    const double multiplier = number_or(j, "multiplier", psi.multiplier(), context);
    const double scale = number_or(j, "scale", psi.scale(), context);
    if (!(multiplier > 0.0 && std::isfinite(multiplier) && scale > 0.0 && std::isfinite(scale))) {
      throw ParameterError("family descriptor: multiplier and scale must be finite and positive");
    }
    psi = psi.with_factors(multiplier, scale);
  }
  return psi;
}

Json to_json(const OperatorTypeSpec& spec) {
  return {{"lambda", spec.lambda}, {"nu", spec.nu}, {"Z", spec.Z}, {"b", bound_to_json(spec.b)}};
}

OperatorTypeSpec operator_type_from_json(const Json& j) {
  const std::string context = "operator type";
  OperatorTypeSpec spec;
  spec.lambda = number(j, "lambda", context);
  spec.nu = number_or(j, "nu", spec.lambda, context);
  spec.Z = number_or(j, "Z", 1.0, context);
  spec.b = number_or(j, "b", kInfinity, context);
  spec.validate();
  return spec;
}

Json to_json(const BoundReport& report) {
  Json j{{"value", report.value},
         {"argmin_q", report.argmin_q},
         {"method", method_name(report.method)},
         {"target_space", to_json(report.target_space)},
         {"flags", report.flags}};
  if (report.same_space_value) j["same_space_value"] = *report.same_space_value;
  return j;
}

BoundReport bound_report_from_json(const Json& j) {
  const std::string context = "bound report";
  BoundReport report{number(j, "value", context),
                     number(j, "argmin_q", context),
                     method_from_name(require(j, "method", context).get<std::string>()),
                     psi_from_json(require(j, "target_space", context)),
                     {},
                     std::nullopt};
  if (j.contains("flags")) report.flags = j.at("flags").get<std::vector<std::string>>();
  if (j.contains("same_space_value")) report.same_space_value = number(j, "same_space_value", context);
  return report;
}

Json to_json(const ScenarioConfig& config) {
  Json j{{"kind", scenario_name(config.kind)},
         {"paths", config.paths},
         {"steps", config.steps},
         {"grid", config.grid},
         {"degree", config.degree},
         {"seed", config.seed},
         {"p_grid", config.p_grid},
         {"scale", config.scale},
         {"zero_generator", config.zero_generator}};
  if (!config.f_values.empty()) j["f_values"] = config.f_values;
  if (!config.cos_coefficients.empty()) j["cos_coefficients"] = config.cos_coefficients;
  if (!config.sin_coefficients.empty()) j["sin_coefficients"] = config.sin_coefficients;
  return j;
}

ScenarioConfig scenario_from_json(const Json& j) {
  const std::string context = "scenario config";
  if (!j.is_object()) throw ParameterError("scenario config must be a JSON object");
  ScenarioConfig config;
  const auto& kind = require(j, "kind", context);
  if (!kind.is_string()) throw ParameterError("scenario config: \"kind\" must be a string");
  config.kind = scenario_from_name(kind.get<std::string>());
  config.paths = count(j, "paths", config.paths);
  config.steps = count(j, "steps", config.steps);
  config.grid = count(j, "grid", config.grid);
  config.degree = count(j, "degree", config.degree);
  if (j.contains("seed")) {
    const auto& seed = j.at("seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
      throw ParameterError("scenario config: \"seed\" must be a nonnegative 64-bit integer");
    }
    config.seed = seed.get<std::uint64_t>();
  }
  if (j.contains("p_grid")) config.p_grid = numbers(j.at("p_grid"), "scenario p_grid");
  config.scale = number_or(j, "scale", config.scale, context);
  if (j.contains("zero_generator")) config.zero_generator = j.at("zero_generator").get<bool>();
  if (j.contains("f_values")) config.f_values = numbers(j.at("f_values"), "scenario f_values");
  if (j.contains("cos_coefficients")) {
    config.cos_coefficients = numbers(j.at("cos_coefficients"), "scenario cos_coefficients");
  }
  if (j.contains("sin_coefficients")) {
    config.sin_coefficients = numbers(j.at("sin_coefficients"), "scenario sin_coefficients");
  }
  config.validate();
  return config;
}

Json to_json(const VerificationReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"p", r.p},
                    {"input_norm", r.input_norm},
                    {"output_norm", r.output_norm},
                    {"bound", r.bound},
                    {"ratio", r.ratio}});
  }
  Json j{{"check", report.check},
         {"rows", rows},
         {"max_ratio", report.max_ratio},
         {"slack", report.slack},
         {"pass", report.pass},
         {"vacuous", report.vacuous},
         {"lower_bound_flag", report.lower_bound_flag},
         {"notes", report.notes}};
  if (report.min_growth) j["min_growth"] = *report.min_growth;
  if (report.fitted_Z) j["fitted_Z"] = *report.fitted_Z;
  if (report.config) j["config"] = to_json(*report.config);
  return j;
}

VerificationReport verification_report_from_json(const Json& j) {
  const std::string context = "verification report";
  VerificationReport report;
  report.check = require(j, "check", context).get<std::string>();
  for (const auto& r : require(j, "rows", context)) {
    report.rows.push_back({number(r, "p", context), number(r, "input_norm", context),
                           number(r, "output_norm", context), number(r, "bound", context),
                           number(r, "ratio", context)});
  }
  report.max_ratio = number(j, "max_ratio", context);
  report.slack = number(j, "slack", context);
  report.pass = require(j, "pass", context).get<bool>();
  report.vacuous = require(j, "vacuous", context).get<bool>();
  report.lower_bound_flag = require(j, "lower_bound_flag", context).get<bool>();
  report.notes = require(j, "notes", context).get<std::vector<std::string>>();
  if (j.contains("min_growth")) report.min_growth = number(j, "min_growth", context);
  if (j.contains("fitted_Z")) report.fitted_Z = number(j, "fitted_Z", context);
  if (j.contains("config")) report.config = scenario_from_json(j.at("config"));
  return report;
}

EmpiricalSample read_sample_csv(std::istream& in) {
  std::vector<double> values;
  std::vector<double> weights;
  std::string line;
  std::size_t line_no = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.empty() || fields.size() > 2) {
      throw ParameterError("sample CSV line " + std::to_string(line_no) + ": expected value[,weight]");
    }
    std::vector<double> parsed;
    bool numeric = true;
    for (const auto& f : fields) {
      std::size_t used = 0;
      try {
        parsed.push_back(std::stod(f, &used));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
      if (f.find_first_not_of(" \t\r", used) != std::string::npos) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (!seen_data) {
        seen_data = true;  // header line
        continue;
      }
      throw ParameterError("sample CSV line " + std::to_string(line_no) + ": not a number: " + line);
    }
    seen_data = true;
    if (!values.empty() && (parsed.size() == 2) != !weights.empty()) {
      throw ParameterError("sample CSV line " + std::to_string(line_no) +
                           ": weights must be given on every line or on none");
    }
    values.push_back(parsed[0]);
    if (parsed.size() == 2) weights.push_back(parsed[1]);
  }
  if (weights.empty()) return EmpiricalSample(std::move(values));
  return EmpiricalSample::with_raw_weights(std::move(values), std::move(weights));
}

EmpiricalSample sample_from_json(const Json& j) {
  if (j.is_array()) return EmpiricalSample(numbers(j, "sample"));
  if (j.is_object()) {
    auto values = numbers(require(j, "values", "sample"), "sample values");
    if (!j.contains("weights")) return EmpiricalSample(std::move(values));
    return EmpiricalSample::with_raw_weights(std::move(values), numbers(j.at("weights"), "sample weights"));
  }
  throw ParameterError("sample JSON must be an array or an object with \"values\"");
}

EmpiricalSample read_sample_file(const std::string& path) {
  const bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  if (is_json) return sample_from_json(read_json_file(path));
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open sample file " + path);
  return read_sample_csv(in);
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParameterError("malformed JSON in " + what + ": " + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void emit_table(const VerificationReport& report, std::ostream& out) {
  if (report.config) {
    const auto& c = *report.config;
    out << "# kind=" << scenario_name(c.kind) << " paths=" << c.paths << " steps=" << c.steps << " grid=" << c.grid
        << " degree=" << c.degree << " seed=" << c.seed << "\n";
  }
  out << kTableHeader << "\n";
  for (const auto& r : report.rows) {
    out << format_number(r.p) << ',' << format_number(r.input_norm) << ',' << format_number(r.output_norm) << ','
        << format_number(r.bound) << ',' << format_number(r.ratio) << "\n";
  }
}

}  // namespace gls
