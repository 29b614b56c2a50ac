#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "infinitesimal/analytic.hpp"
#include "infinitesimal/errors.hpp"
#include "infinitesimal/expr.hpp"
#include "infinitesimal/json_io.hpp"
#include "infinitesimal/laurent.hpp"
#include "infinitesimal/microscope.hpp"
#include "infinitesimal/sequences.hpp"
#include "infinitesimal/svg.hpp"

namespace infinitesimal::cli {

namespace {

constexpr const char* kGrammarReference =
    "expression grammar:\n"
    "  expr   := term (('+'|'-') term)*\n"
    "  term   := factor (('*'|'/') factor)*\n"
    "  factor := '-' factor | power\n"
    "  power  := atom ('^' factor)?\n"
    "  atom   := number | ident | ident '(' expr ')' | '(' expr ')'\n"
    "  functions: sin cos exp log sqrt asin abs sign blancmange; constant: pi\n"
    "element text form: terms like 3.5, 2e^1, -0.25e^3, e (e denotes epsilon)\n";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::optional<double> parse_real(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

double require_real(const std::string& flag, const std::string& text) {
  if (auto v = parse_real(text)) return *v;
  throw UsageError(flag + ": expected a real number, got '" + text + "'");
}

std::pair<std::string, std::string> split_binding(const std::string& flag, const std::string& binding) {
  const auto eq = binding.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == binding.size()) {
    throw UsageError(flag + ": expected var=value, got '" + binding + "'");
  }
  return {binding.substr(0, eq), binding.substr(eq + 1)};
}

std::string join_intervals(const std::vector<Interval>& intervals) {
  std::string out;
  for (const auto& i : intervals) {
    if (!out.empty()) out += ' ';
    out += "[" + format_real(i.lo) + ", " + format_real(i.hi) + "]";
  }
  return out;
}

std::string describe(const LimitReport& r) {
  std::string out(to_string(r.kind));
  if (r.kind == LimitReport::Kind::Converges) out += " " + format_real(r.limit);
  if (r.kind == LimitReport::Kind::Clusters) out += " " + join_intervals(r.clusters);
  out += " tail_index=" + std::to_string(r.tail_index) + " tolerance=" + format_real(r.tolerance);
  return out;
}

std::string describe(const SideLimit& s) {
  std::string out(to_string(s.kind));
  if (s.kind == SideLimit::Kind::Finite) out += " " + format_real(s.value);
  if (s.kind == SideLimit::Kind::Clusters) out += " " + join_intervals({s.cluster});
  return out;
}

std::string describe(const ProbeReport& r) {
  std::string out(to_string(r.kind));
  if (r.kind != ProbeReport::Kind::Continuous) out += " evidence: " + describe(r.evidence);
  return out;
}

struct Emitter {
  const RunConfig& config;
  std::ostream& out;

  void emit(const nlohmann::json& json, const std::string& text) const {
    if (config.format == OutputFormat::Json) {
      out << json.dump() << '\n';
    } else {
      out << text << '\n';
    }
  }
};

std::string format_name(OutputFormat f) {
  switch (f) {
    case OutputFormat::Text: return "text";
    case OutputFormat::Json: return "json";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Svg: return "svg";
  }
  return "text";
}

void validate(const RunConfig& config) {
  if (config.order < kMinOrder || config.order > kMaxOrder) {
    throw UsageError("--field-order: must lie in [4, 64]");
  }
  if (!(config.tolerance > 0.0)) throw UsageError("--tol: must be positive");
  if (!(config.sequence_tolerance > 0.0)) throw UsageError("--seq-tol: must be positive");
  if (config.horizon < kMinHorizon) throw UsageError("--horizon: must be at least 100");
}

std::vector<std::int64_t> parse_list(const std::string& flag, const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || ptr != item.data() + item.size() || v < 1) {
      throw UsageError(flag + ": expected a comma-separated list of positive integers, got '" + text + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(flag + ": empty list");
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot write '" + path + "'");
  file << contents;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  std::string format = "text";

  CLI::App app{"Infinitesimal arithmetic over truncated Laurent series in e, with sequence analysis "
               "and microscope figures.",
               "epsilon"};
  app.fallthrough();
  app.require_subcommand(1);
  app.footer(kGrammarReference);
  app.add_option("--field-order", config.order, "Truncation order N of field elements (4..64)");
  app.add_option("--tol", config.tolerance, "Tolerance for field-level comparisons");
  app.add_option("--seq-tol", config.sequence_tolerance, "Tolerance for sequence scans");
  app.add_option("--horizon", config.horizon, "Last index examined by sequence scans");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "csv", "svg"}));
  app.add_option("--seed", config.seed, "Seed for randomized checks");

  // eval
  std::string eval_expr;
  std::vector<std::string> eval_bindings;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate an expression over reals or field elements");
  eval_cmd->add_option("expr", eval_expr, "Expression")->required();
  eval_cmd->add_option("--at", eval_bindings, "Binding var=value; value is a real or an element (e.g. e, 1 - e^1)");

  // derive
  std::string derive_expr, derive_at;
  int derive_order = 1;
  auto* derive_cmd = app.add_subcommand("derive", "Derivative as the standard part of an infinitesimal quotient");
  derive_cmd->add_option("expr", derive_expr, "Expression in one variable")->required();
  derive_cmd->add_option("--at", derive_at, "Point x=VAL")->required();
  derive_cmd->add_option("--order", derive_order, "Derivative order k (0 <= k < N)");

  // sequence commands
  std::string limit_seq;
  auto* limit_cmd = app.add_subcommand("limit", "Detect the limit behaviour of a sequence in n");
  limit_cmd->add_option("seq", limit_seq, "Sequence expression in n or built-in name")->required();

  std::string strip_seq, strip_l, strip_eps;
  auto* strip_cmd = app.add_subcommand("strip", "Epsilon-strip entry index around a candidate limit");
  strip_cmd->add_option("seq", strip_seq, "Sequence expression in n")->required();
  strip_cmd->add_option("--L", strip_l, "Candidate limit")->required();
  strip_cmd->add_option("--eps", strip_eps, "Strip halfwidth")->required();

  std::string clusters_seq, clusters_res;
  auto* clusters_cmd = app.add_subcommand("clusters", "Cluster values of a sequence");
  clusters_cmd->add_option("seq", clusters_seq, "Sequence expression in n")->required();
  clusters_cmd->add_option("--res", clusters_res, "Bin width")->required();

  std::string cont_expr, cont_at, cont_interval, cont_alpha = "1/n";
  int cont_grid = 9;
  auto* cont_cmd = app.add_subcommand("continuity", "Probe continuity along an infinitesimal increment");
  cont_cmd->add_option("expr", cont_expr, "Expression in one variable")->required();
  auto* cont_at_opt = cont_cmd->add_option("--at", cont_at, "Point x=VAL");
  auto* cont_interval_opt = cont_cmd->add_option("--interval", cont_interval, "Probe a grid in (lo,hi)");
  cont_at_opt->excludes(cont_interval_opt);
  cont_cmd->add_option("--alpha", cont_alpha, "Increment sequence in n");
  cont_cmd->add_option("--grid", cont_grid, "Grid size for --interval");

  std::string onesided_expr, onesided_at;
  int onesided_max_exponent = kDefaultMaxExponent;
  auto* onesided_cmd = app.add_subcommand("onesided", "Left and right limits along x0 -/+ 2^-k");
  onesided_cmd->add_option("expr", onesided_expr, "Expression in one variable")->required();
  onesided_cmd->add_option("--at", onesided_at, "Point x=VAL")->required();
  onesided_cmd->add_option("--max-exponent", onesided_max_exponent, "Largest k sampled");

  std::string sum_n, sum_x;
  std::int64_t sum_oracle = 1'000'000;
  auto* sum_cmd = app.add_subcommand("sumtheorem", "Error term s(x) - s_n(x) of sum sin(kx)/k along x = 1/n");
  sum_cmd->add_option("--n", sum_n, "Comma-separated n values")->required();
  sum_cmd->add_option("--x", sum_x, "Evaluate at a fixed x instead of x = 1/n");
  sum_cmd->add_option("--oracle", sum_oracle, "Partial-sum terms M for the oracle");

  std::string decompose_element;
  auto* decompose_cmd = app.add_subcommand("decompose", "Standard part plus infinitesimal part");
  decompose_cmd->add_option("element", decompose_element, "Element, e.g. '1 - e^1'")->required();

  std::string magnify_element, magnify_center;
  int magnify_power = 1;
  auto* magnify_cmd = app.add_subcommand("magnify", "Microscope map (x - c)/e^power");
  magnify_cmd->add_option("element", magnify_element, "Element x")->required();
  magnify_cmd->add_option("--center", magnify_center, "Element c")->required();
  magnify_cmd->add_option("--power", magnify_power, "Power of e");

  std::string figure_name, figure_out, figure_sidecar;
  MicroscopeParams micro;
  auto* figure_cmd = app.add_subcommand("figure", "Render a figure as SVG");
  figure_cmd->add_option("name", figure_name, "fig5 | fig7a | fig7b | microscope")
      ->required()
      ->check(CLI::IsMember({"fig5", "fig7a", "fig7b", "microscope"}));
  figure_cmd->add_option("--out", figure_out, "Write the SVG here instead of standard output");
  figure_cmd->add_option("--sidecar", figure_sidecar, "Write the JSON parameter sidecar here");
  figure_cmd->add_option("--function", micro.function, "microscope: function of x");
  figure_cmd->add_option("--center", micro.center, "microscope: center");
  figure_cmd->add_option("--halfwidth", micro.halfwidth, "microscope: outermost halfwidth");
  figure_cmd->add_option("--levels", micro.levels, "microscope: number of halvings");
  figure_cmd->add_option("--points", micro.n_points, "microscope: samples per frame");

  auto* config_cmd = app.add_subcommand("config", "Configuration");
  std::string config_action;
  config_cmd->add_option("action", config_action, "show")->required()->check(CLI::IsMember({"show"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << kGrammarReference;
    return kExitUsage;
  }

  try {
    config.format = format == "json"  ? OutputFormat::Json
                    : format == "csv" ? OutputFormat::Csv
                    : format == "svg" ? OutputFormat::Svg
                                      : OutputFormat::Text;
    validate(config);
    const Emitter emit{config, out};
    const int order = config.order;
    auto element = [&](const std::string& text) { return parse_element(text, order); };
    auto at_value = [](const std::string& flag, const std::string& binding) {
      const auto [var, value] = split_binding(flag, binding);
      return std::pair{var, require_real(flag, value)};
    };

    if (*eval_cmd) {
      const Expr e = parse(eval_expr);
      Environment env;
      for (const auto& binding : eval_bindings) {
        const auto [var, text] = split_binding("--at", binding);
        if (auto r = parse_real(text)) {
          env[var] = *r;
        } else {
          env[var] = element(text);
        }
      }
      const auto vars = e.free_variables();
      if (vars.count("e") && !env.count("e")) env["e"] = LaurentNumber::epsilon(order);
      const Value v = eval(e, env);
      if (const auto* r = std::get_if<double>(&v)) {
        emit.emit({{"value", *r}}, format_real(*r));
      } else {
        const auto& x = std::get<LaurentNumber>(v);
        nlohmann::json j = to_json(x);
        j["text"] = to_string(x);
        j["classification"] = to_string(classify(x));
        emit.emit(j, to_string(x));
      }
    } else if (*derive_cmd) {
      const Expr f = parse(derive_expr);
      const auto [var, x0] = at_value("--at", derive_at);
      if (sole_variable(f) != var && !f.free_variables().empty()) {
        throw UsageError("--at: expression variable is '" + sole_variable(f) + "', not '" + var + "'");
      }
      const double d = derive_order == 1 ? derivative(f, x0, order) : nth_derivative(f, x0, derive_order, order);
      emit.emit({{"derivative", d}, {"order", derive_order}, {"at", x0}}, format_real(d));
    } else if (*limit_cmd) {
      const auto report = limit_detect(SeqQuantity::from_text(limit_seq), config.sequence_tolerance, config.horizon);
      emit.emit(to_json(report), describe(report));
    } else if (*strip_cmd) {
      const auto report = epsilon_strip(SeqQuantity::from_text(strip_seq), require_real("--L", strip_l),
                                        require_real("--eps", strip_eps), config.horizon);
      emit.emit(to_json(report), report.inside
                                     ? "entry_index " + std::to_string(report.entry_index)
                                     : "Fail first_violation_beyond " + std::to_string(report.first_violation_beyond));
    } else if (*clusters_cmd) {
      const auto intervals = cluster_values(SeqQuantity::from_text(clusters_seq),
                                            require_real("--res", clusters_res), config.horizon);
      nlohmann::json j = nlohmann::json::array();
      for (const auto& i : intervals) j.push_back(to_json(i));
      emit.emit(j, join_intervals(intervals));
    } else if (*cont_cmd) {
      const Expr f = parse(cont_expr);
      const SeqQuantity alpha = SeqQuantity::from_text(cont_alpha);
      if (!cont_interval.empty()) {
        const auto comma = cont_interval.find(',');
        if (comma == std::string::npos) throw UsageError("--interval: expected lo,hi");
        const double lo = require_real("--interval", cont_interval.substr(0, comma));
        const double hi = require_real("--interval", cont_interval.substr(comma + 1));
        const auto report = continuity_on_interval(f, lo, hi, alpha, config.sequence_tolerance,
                                                   config.horizon, cont_grid);
        std::string text = report.continuous ? "continuous" : "not continuous";
        for (const auto& s : report.samples) text += "\n  x0=" + format_real(s.x0) + " " + describe(s);
        emit.emit(to_json(report), text);
      } else {
        if (cont_at.empty()) throw UsageError("--at: required unless --interval is given");
        const auto [var, x0] = at_value("--at", cont_at);
        (void)var;
        const auto report = continuity_probe(f, x0, alpha, config.sequence_tolerance, config.horizon);
        emit.emit(to_json(report), describe(report));
      }
    } else if (*onesided_cmd) {
      const Expr f = parse(onesided_expr);
      const auto [var, x0] = at_value("--at", onesided_at);
      (void)var;
      const auto report = one_sided_limits(f, x0, config.sequence_tolerance, onesided_max_exponent);
      emit.emit(to_json(report), "left: " + describe(report.left) + "\nright: " + describe(report.right));
    } else if (*sum_cmd) {
      const auto ns = parse_list("--n", sum_n);
      std::optional<double> fixed;
      if (!sum_x.empty()) fixed = require_real("--x", sum_x);
      const auto table = sum_theorem_probe(ns, sum_oracle, fixed);
      if (config.format == OutputFormat::Json) {
        out << to_json(table).dump() << '\n';
      } else {
        out << to_csv(table);
      }
    } else if (*decompose_cmd) {
      const LaurentNumber x = element(decompose_element);
      const auto parts = decompose(x);
      nlohmann::json j = to_json(parts);
      j["classification"] = to_string(classify(x));
      emit.emit(j, "standard " + format_real(parts.standard) + "\ninfinitesimal " +
                       to_string(parts.infinitesimal_part) + "\nclassification " +
                       std::string(to_string(classify(x))));
    } else if (*magnify_cmd) {
      const LaurentNumber m = magnify(element(magnify_element), element(magnify_center), magnify_power);
      nlohmann::json j = to_json(m);
      j["text"] = to_string(m);
      emit.emit(j, to_string(m));
    } else if (*figure_cmd) {
      const Figure fig = make_figure(figure_name, micro);
      if (!figure_sidecar.empty()) write_file(figure_sidecar, to_json(fig.spec).dump(2) + "\n");
      if (figure_out.empty()) {
        out << fig.svg;
      } else {
        write_file(figure_out, fig.svg);
      }
    } else if (*config_cmd) {
      const nlohmann::json j{{"order", config.order},
                             {"tolerance", config.tolerance},
                             {"sequence_tolerance", config.sequence_tolerance},
                             {"horizon", config.horizon},
                             {"format", format_name(config.format)},
                             {"seed", config.seed}};
      std::string text;
      for (const auto& [key, value] : j.items()) text += key + " = " + value.dump() + "\n";
      text.pop_back();
      emit.emit(j, text);
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n' << kGrammarReference;
    return kExitUsage;
  } catch (const SyntaxError& e) {
    err << "ERROR " << error_code_name(ErrorCode::Syntax) << ": " << e.what() << '\n' << kGrammarReference;
    return kExitUsage;
  } catch (const MathError& e) {
    std::string message = e.what();
    std::replace(message.begin(), message.end(), '\n', ' ');
    err << "ERROR " << error_code_name(e.code()) << ": " << message << '\n';
    return e.code() == ErrorCode::InvalidArgument ? kExitUsage : kExitMath;
  }
}

}  // namespace infinitesimal::cli
