#include "gls/cli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "gls/bounds.hpp"
#include "gls/conjugate.hpp"
#include "gls/empirics.hpp"
#include "gls/error.hpp"
#include "gls/io.hpp"
#include "gls/rng.hpp"
#include "gls/verifier.hpp"

namespace gls::cli {

namespace {

// Flags that describe a generating function, shared by most subcommands.
struct PsiFlags {
  std::string family;
  std::string json;
  std::string L;
  std::optional<double> m, r, b, beta, gamma;

  void add_to(CLI::App* app) {
    app->add_option("--psi", family, "family: psi_m, psi_m_l, psi_b_gamma_l, degenerate, psi_b_beta");
    app->add_option("--psi-json", json, "family descriptor as JSON text, or @file");
    app->add_option("--m", m, "psi_m / psi_m_l exponent m");
    app->add_option("--r", r, "degenerate support bound r");
    app->add_option("--b", b, "support bound b of the bounded families");
    app->add_option("--beta", beta, "psi_b_beta exponent beta");
    app->add_option("--gamma", gamma, "psi_b_gamma_l exponent gamma");
    app->add_option("--L", L, "slowly varying L: log_power:R, constant:C or a bare exponent R");
  }

  bool given() const { return !family.empty() || !json.empty(); }

  GeneratingFunction build() const {
    if (!json.empty()) return psi_from_json(load_json(json, "--psi-json"));
    if (family.empty()) throw ParameterError("a generating function is required: give --psi or --psi-json");
    Json j{{"family", family}};
    auto put = [&](const char* key, const std::optional<double>& v, const char* flag) {
      if (!v) throw ParameterError("family " + family + " requires " + flag);
      j[key] = *v;
    };
    if (family == "psi_m") {
      put("m", m, "--m");
    } else if (family == "psi_m_l") {
      put("m", m, "--m");
    } else if (family == "degenerate") {
      put("r", r, "--r");
    } else if (family == "psi_b_beta") {
      put("b", b, "--b");
      put("beta", beta, "--beta");
    } else if (family == "psi_b_gamma_l") {
      put("b", b, "--b");
      put("gamma", gamma, "--gamma");
    } else if (family == "tabulated" || family == "power_weighted") {
      throw ParameterError("family " + family + " must be given with --psi-json");
    }
    if (!L.empty()) j["L"] = slowly_varying_json(L);
    return psi_from_json(j);
  }

  static Json load_json(const std::string& text, const std::string& what) {
    if (!text.empty() && text.front() == '@') return read_json_file(text.substr(1));
    return parse_json(text, what);
  }

  static Json slowly_varying_json(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = colon == std::string::npos ? "log_power" : text.substr(0, colon);
    const std::string value = colon == std::string::npos ? text : text.substr(colon + 1);
    double x = 0.0;
    try {
      std::size_t used = 0;
      x = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw ParameterError("--L expects log_power:R, constant:C or a number (got '" + text + "')");
    }
    if (kind == "log_power" || kind == "log") return {{"kind", "log_power"}, {"r", x}};
    if (kind == "constant" || kind == "const") return {{"kind", "constant"}, {"c", x}};
    throw ParameterError("--L kind must be log_power or constant (got '" + kind + "')");
  }
};

struct OutputFlags {
  std::string out;
  std::string format;

  void add_to(CLI::App* app) {
    app->add_option("--out", out, "write the report to this file (.json or .csv)");
    app->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  }

  bool csv() const {
    if (!format.empty()) return format == "csv";
    return out.size() >= 4 && out.compare(out.size() - 4, 4, ".csv") == 0;
  }
};

void write_text(const std::string& text, const OutputFlags& flags, std::ostream& out) {
  if (flags.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(flags.out);
  if (!file) throw ParameterError("cannot write " + flags.out);
  file << text;
}

void emit_json(const Json& j, const OutputFlags& flags, std::ostream& out) {
  if (flags.csv()) throw ParameterError("CSV output is only available for verify reports; use --format json");
  write_text(j.dump(2) + "\n", flags, out);
}

void emit_report(const VerificationReport& report, const OutputFlags& flags, std::ostream& out) {
  if (flags.csv()) {
    std::ostringstream table;
    emit_table(report, table);
    write_text(table.str(), flags, out);
  } else {
    write_text(to_json(report).dump(2) + "\n", flags, out);
  }
}

template <class T>
T required(const std::optional<T>& v, const char* flag) {
  if (!v) throw ParameterError("missing required flag " + std::string(flag));
  return *v;
}

Json conjugate_point_json(double u, const ConjugatePoint& c) {
  return {{"u", u}, {"value", c.value}, {"argmax_p", c.argmax}};
}

// Limit function of the dyadic-martingale convergence demo.
double convergence_target(double t) { return std::sin(2.0 * std::numbers::pi * t) + t; }

struct Options {
  PsiFlags psi;
  OutputFlags output;
  std::optional<double> lambda, nu, Z, norm, y, slack, threshold, tau_m, scale;
  std::vector<double> p, u, t;
  std::vector<std::string> inputs;
  std::string method = "grid";
  std::string weight_json, against_json, config_path;
  std::optional<std::size_t> paths, steps, grid, degree, nodes;
  std::optional<std::uint64_t> seed;
  bool gls = false;
  bool zero = false;
};

void add_operator_flags(CLI::App* app, Options& o) {
  app->add_option("--lambda", o.lambda, "operator power lambda");
  app->add_option("--nu", o.nu, "operator power nu (defaults to lambda)");
  app->add_option("--Z", o.Z, "operator constant Z (default 1)");
}

void add_scenario_flags(CLI::App* app, Options& o) {
  app->add_option("--paths", o.paths, "number of simulated paths");
  app->add_option("--steps", o.steps, "steps per path / truncation level N / dyadic levels");
  app->add_option("--grid", o.grid, "grid resolution");
  app->add_option("--degree", o.degree, "trigonometric degree D");
  app->add_option("--seed", o.seed, "64-bit seed (generated and echoed when absent)");
  app->add_option("--p", o.p, "comma-separated evaluation p-grid")->delimiter(',');
  app->add_option("--slack", o.slack, "relative slack of the check");
  app->add_option("--config", o.config_path, "scenario config JSON file");
  app->add_option("--scale", o.scale, "multiplier of the Doob increments");
  app->add_flag("--zero", o.zero, "use the zero-increment generator (Doob)");
  app->add_flag("--gls", o.gls, "check GLS-norm propagation instead of the per-p type inequality");
  o.output.add_to(app);
}

ScenarioConfig scenario(const Options& o, ScenarioKind kind) {
  ScenarioConfig config;
  if (!o.config_path.empty()) {
    config = scenario_from_json(read_json_file(o.config_path));
    if (config.kind != kind) {
      throw ParameterError("config file describes a " + scenario_name(config.kind) + " scenario, not " +
                           scenario_name(kind));
    }
  } else {
    config.kind = kind;
    if (kind == ScenarioKind::DunfordSchwartz) config.steps = 256;
    config.seed = random_seed();
  }
  if (o.paths) config.paths = *o.paths;
  if (o.steps) config.steps = *o.steps;
  if (o.grid) config.grid = *o.grid;
  if (o.degree) config.degree = *o.degree;
  if (o.seed) config.seed = *o.seed;
  if (!o.p.empty()) config.p_grid = o.p;
  if (o.scale) config.scale = *o.scale;
  if (o.zero) config.zero_generator = true;
  config.validate();
  return config;
}

VerificationReport run_scenario(const Options& o, ScenarioKind kind, const GridPolicy& policy) {
  const auto config = scenario(o, kind);
  const auto sim = simulate(config);
  const bool fourier = kind == ScenarioKind::FourierMaximal;
  OperatorTypeSpec spec;
  spec.lambda = o.lambda.value_or(fourier ? 4.0 : 1.0);
  spec.nu = o.nu.value_or(o.lambda ? *o.lambda : (fourier ? 3.0 : 1.0));
  spec.Z = o.Z.value_or(1.0);
  VerificationReport report;
  if (o.gls) {
    const auto psi = o.psi.given() ? o.psi.build() : GeneratingFunction::psi_m(2.0);
    spec.b = psi.support();
    report = verify_gls_propagation(sim.f, sim.g, psi, spec, o.slack.value_or(0.05), policy);
  } else {
    report = verify_type(sim.f, sim.g, spec, config.p_grid, o.slack.value_or(0.02));
    report.fitted_Z = fit_type_constant(sim.f, sim.g, spec.lambda, spec.nu, config.p_grid);
  }
  report.notes.push_back(truncation_note(sim.truncation));
  report.config = config;
  return report;
}

VerificationReport run_convergence(const Options& o, GridPolicy policy) {
  const std::size_t points = o.grid.value_or(std::size_t{1} << 14);
  if (points < 2 || (points & (points - 1)) != 0) throw ParameterError("--grid must be a power of two >= 2");
  const auto depth = static_cast<std::size_t>(std::countr_zero(points));
  const std::size_t levels = o.steps.value_or(std::min<std::size_t>(12, depth));
  policy.nodes = o.nodes.value_or(128);
  const auto zeta = o.psi.given() ? o.psi.build() : GeneratingFunction::psi_m(2.0);
  const auto tau = GeneratingFunction::psi_m(o.tau_m.value_or(1.0));
  const auto martingale = dyadic_martingale(convergence_target, depth, levels);
  auto report = verify_convergence(martingale.levels, martingale.limit, zeta, tau, o.threshold.value_or(1e-2), policy);
  report.notes.push_back("g_inf(t) = sin(2 pi t) + t on " + std::to_string(points) + " dyadic cells");
  return report;
}

int run(CLI::App& app, Options& o, std::ostream& out) {
  const auto policy = GridPolicy::from_env();
  auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();

  if (name == "k-constant") {
    const auto psi = o.psi.build();
    const double lambda = required(o.lambda, "--lambda");
    auto report = k_constant(psi, lambda, std::nullopt, policy);
    if (o.method == "closed-form") {
      const auto closed = k_reference(psi, lambda);
      report.value = closed.value;
      report.method = BoundMethod::ClosedForm;
      if (const auto* f = std::get_if<PsiMParams>(&psi.params()); f && lambda > 0.0) {
        report.argmin_q = f->m * lambda + 1.0;
        report.flags.clear();
      } else if (const auto* f = std::get_if<PsiBBetaParams>(&psi.params())) {
        report.argmin_q = (lambda * f->b + f->beta) / (lambda + f->beta);
        report.flags.clear();
      }
      if (closed.upper_bound_only) report.flags.emplace_back(flags::kUpperBoundOnly);
    } else if (o.method == "simple-upper") {
      report.value = k_simple_upper(psi, lambda);
      report.argmin_q = psi.support() > 2.0 ? 2.0 : 0.5 * (psi.support() + 1.0);
      report.method = BoundMethod::SimpleUpper;
      report.flags = {flags::kUpperBoundOnly};
    }
    emit_json(to_json(report), o.output, out);
  } else if (name == "conjugate") {
    const auto psi = o.psi.build();
    if (o.u.empty() && o.t.empty()) throw ParameterError("conjugate needs --u (and/or --y for M[psi])");
    const auto v = v_tabulation(psi, policy);
    Json points = Json::array();
    for (double u : o.u) points.push_back(conjugate_point_json(u, fenchel_point(v, u)));
    Json orlicz = Json::array();
    for (double y : o.t) orlicz.push_back({{"y", y}, {"M", orlicz_M(psi, y, policy)}});
    emit_json({{"psi", to_json(psi)}, {"conjugate", points}, {"orlicz_M", orlicz}}, o.output, out);
  } else if (name == "tail-bound") {
    const auto psi = o.psi.build();
    const double norm = required(o.norm, "--norm");
    const double y = required(o.y, "--y");
    const double bound = tail_bound(psi, norm, y, policy);
    emit_json({{"y", y}, {"norm", norm}, {"threshold", std::numbers::e * norm}, {"bound", bound}}, o.output, out);
  } else if (name == "norm") {
    const auto psi = o.psi.build();
    if (o.inputs.size() != 1) throw ParameterError("norm needs exactly one --input sample file");
    const auto sample = read_sample_file(o.inputs.front());
    const auto result = gls_norm(moment_profile(sample, domain_grid(psi, policy)), psi);
    emit_json({{"value", result.value},
               {"argmax_p", result.argmax_p},
               {"at_grid_edge", result.at_grid_edge},
               {"psi", to_json(psi)}},
              o.output, out);
  } else if (name == "natural") {
    if (o.inputs.empty()) throw ParameterError("natural needs at least one --input sample file");
    const auto grid = p_grid(kInfinity, policy);
    std::vector<MomentProfile> profiles;
    for (const auto& path : o.inputs) profiles.push_back(moment_profile(read_sample_file(path), grid));
    emit_json(to_json(natural_function(profiles)), o.output, out);
  } else if (name == "rearrange") {
    if (o.inputs.size() != 1) throw ParameterError("rearrange needs exactly one --input sample file");
    const auto sample = read_sample_file(o.inputs.front());
    const auto pair = rearrange(sample);
    Json points = Json::array();
    for (double t : o.t) points.push_back({{"t", t}, {"f_star", pair.f_star(t)}, {"f_star_star", pair.f_star_star(t)}});
    Json norms = Json::array();
    for (double p : o.p) {
      norms.push_back({{"p", p}, {"rearranged", pair.lp_norm(p)}, {"original", lp_norm(sample, p)}});
    }
    emit_json({{"sorted_values", pair.sorted_values()},
               {"cumulative_widths", pair.cumulative_widths()},
               {"points", points},
               {"lp_norms", norms}},
              o.output, out);
  } else if (name == "propagate") {
    const auto psi = o.psi.build();
    OperatorTypeSpec spec;
    spec.lambda = required(o.lambda, "--lambda");
    spec.nu = o.nu.value_or(spec.lambda);
    spec.Z = o.Z.value_or(1.0);
    spec.b = psi.support();
    emit_json(to_json(propagate(spec, psi, required(o.norm, "--norm"), policy)), o.output, out);
  } else if (name == "upsilon") {
    const auto psi = o.psi.build();
    if (o.p.empty()) throw ParameterError("upsilon needs --p");
    Weight weight = [&] {
      if (!o.weight_json.empty()) {
        const auto j = PsiFlags::load_json(o.weight_json, "--weight-json");
        if (!j.is_object() || !j.contains("grid") || !j.contains("values")) {
          throw ParameterError("--weight-json must be {\"grid\": [...], \"values\": [...]}");
        }
        return Weight::tabulated(j.at("grid").get<std::vector<double>>(), j.at("values").get<std::vector<double>>());
      }
      return Weight::operator_type(required(o.lambda, "--lambda (or --weight-json)"), psi.support(), policy);
    }();
    Json rows = Json::array();
    for (double p : o.p) {
      const auto v = upsilon(weight, psi, p);
      rows.push_back({{"p", p}, {"value", v.value}, {"argmin_q", v.argmin_q}, {"right_branch", v.right_branch}});
    }
    emit_json({{"upsilon", rows},
               {"note", "left branch uses Lyapunov's inequality |g|_p <= |g|_q for p <= q"}},
              o.output, out);
  } else if (name == "compare") {
    const auto psi = o.psi.build();
    if (o.against_json.empty()) throw ParameterError("compare needs --against-json");
    const auto nu = psi_from_json(PsiFlags::load_json(o.against_json, "--against-json"));
    emit_json({{"psi", to_json(psi)},
               {"nu", to_json(nu)},
               {"psi_dominated_by_nu", dominates(psi, nu, 1e-3, policy)},
               {"nu_dominated_by_psi", dominates(nu, psi, 1e-3, policy)}},
              o.output, out);
  } else if (name == "verify") {
    auto* kind = sub->get_subcommands().front();
    const std::string k = kind->get_name();
    if (k == "convergence") {
      emit_report(run_convergence(o, policy), o.output, out);
    } else {
      emit_report(run_scenario(o, scenario_from_name(k), policy), o.output, out);
    }
  }
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grand Lebesgue Space toolkit: norms, conjugates, operator constants and simulations",
               "gls_toolkit"};
  app.require_subcommand(1, 1);
  Options o;

  auto* k = app.add_subcommand("k-constant", "K_lambda[psi, b] = inf_q q^lambda psi(q) / (q-1)^lambda");
  o.psi.add_to(k);
  k->add_option("--lambda", o.lambda, "power lambda >= 0");
  k->add_option("--method", o.method, "grid, closed-form or simple-upper")
      ->check(CLI::IsMember({"grid", "closed-form", "simple-upper"}));
  o.output.add_to(k);

  auto* conj = app.add_subcommand("conjugate", "Young-Fenchel conjugate of v(p) = p ln psi(p) and M[psi]");
  o.psi.add_to(conj);
  conj->add_option("--u", o.u, "comma-separated points u")->delimiter(',');
  conj->add_option("--y", o.t, "comma-separated arguments of M[psi]")->delimiter(',');
  o.output.add_to(conj);

  auto* tail = app.add_subcommand("tail-bound", "exp(-v*(ln(y/||f||))) for y >= e ||f||");
  o.psi.add_to(tail);
  tail->add_option("--norm", o.norm, "GLS norm of f");
  tail->add_option("--y", o.y, "level y");
  o.output.add_to(tail);

  auto* norm = app.add_subcommand("norm", "GLS norm of a sample");
  o.psi.add_to(norm);
  norm->add_option("--input", o.inputs, "sample file (.csv or .json)");
  o.output.add_to(norm);

  auto* natural = app.add_subcommand("natural", "natural generating function of a family of samples");
  natural->add_option("--input", o.inputs, "sample files (comma-separated or repeated)")->delimiter(',');
  o.output.add_to(natural);

  auto* re = app.add_subcommand("rearrange", "decreasing rearrangement f° and its average f°°");
  re->add_option("--input", o.inputs, "sample file (.csv or .json)");
  re->add_option("--t", o.t, "comma-separated t in (0, 1]")->delimiter(',');
  re->add_option("--p", o.p, "comma-separated p for norm comparison")->delimiter(',');
  o.output.add_to(re);

  auto* prop = app.add_subcommand("propagate", "bound on ||Q f|| for an operator of type (lambda, nu)");
  o.psi.add_to(prop);
  add_operator_flags(prop, o);
  prop->add_option("--norm", o.norm, "GLS norm of the input");
  o.output.add_to(prop);

  auto* ups = app.add_subcommand("upsilon", "generating function for a general weight W(p)");
  o.psi.add_to(ups);
  ups->add_option("--lambda", o.lambda, "weight (p/(p-1))^lambda");
  ups->add_option("--weight-json", o.weight_json, "tabulated weight {grid, values} as JSON text or @file");
  ups->add_option("--p", o.p, "comma-separated evaluation points")->delimiter(',');
  o.output.add_to(ups);

  auto* verify = app.add_subcommand("verify", "simulate an operator example and check its inequality");
  verify->require_subcommand(1, 1);
  for (const char* kind : {"doob", "dunford-schwartz", "fourier"}) {
    auto* s = verify->add_subcommand(kind, std::string("verify the ") + kind + " scenario");
    add_scenario_flags(s, o);
    add_operator_flags(s, o);
    o.psi.add_to(s);
  }
  auto* conv = verify->add_subcommand("convergence", "dyadic martingale convergence in G tau");
  o.psi.add_to(conv);
  conv->add_option("--tau-m", o.tau_m, "tau = psi_m with this m (default 1)");
  conv->add_option("--steps", o.steps, "number of dyadic levels");
  conv->add_option("--grid", o.grid, "number of cells (power of two)");
  conv->add_option("--threshold", o.threshold, "distance threshold (default 0.01)");
  conv->add_option("--nodes", o.nodes, "p-grid nodes (default 128)");
  o.output.add_to(conv);

  auto* cmp = app.add_subcommand("compare", "domination order psi << nu");
  o.psi.add_to(cmp);
  cmp->add_option("--against-json", o.against_json, "descriptor of nu as JSON text or @file");
  o.output.add_to(cmp);

  // Name unknown subcommands explicitly; CLI11 would only report a missing one.
  auto known = [](CLI::App* parent, const std::string& name) {
    for (const auto* s : parent->get_subcommands({})) {
      if (s->get_name() == name) return true;
    }
    return false;
  };
  if (!args.empty() && args[0].rfind('-', 0) != 0) {
    const bool bad_top = !known(&app, args[0]);
    const bool bad_kind = !bad_top && args[0] == "verify" && args.size() > 1 && args[1].rfind('-', 0) != 0 &&
                          !known(verify, args[1]);
    if (bad_top || bad_kind) {
      err << "usage error: unknown subcommand '" << (bad_top ? args[0] : args[1]) << "'\n"
          << (bad_top ? app.help() : verify->help());
      return kExitUsage;
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ConversionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    return run(app, o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == Error::Kind::Precondition ? kExitPrecondition : kExitComputation;
  } catch (const Json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitComputation;
  }
}

}  // namespace gls::cli
