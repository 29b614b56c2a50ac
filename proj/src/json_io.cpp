#include "infinitesimal/json_io.hpp"

#include "infinitesimal/errors.hpp"

namespace infinitesimal {

using nlohmann::json;

json to_json(const LaurentNumber& x) {
  const auto c = x.coeffs();
  return {{"valuation", x.valuation()}, {"order", x.order()}, {"coeffs", std::vector<double>(c.begin(), c.end())}};
}

LaurentNumber laurent_from_json(const json& j) {
  try {
    const int order = j.at("order").get<int>();
    auto coeffs = j.at("coeffs").get<std::vector<double>>();
    if (static_cast<int>(coeffs.size()) != order) {
      throw MathError(ErrorCode::InvalidArgument, "coeffs length must equal order");
    }
    return LaurentNumber::from_coefficients(j.at("valuation").get<int>(), std::move(coeffs), order);
  } catch (const json::exception& err) {
    throw MathError(ErrorCode::InvalidArgument, std::string("malformed element JSON: ") + err.what());
  }
}

json to_json(const Decomposition& d) {
  return {{"standard", d.standard},
          {"infinitesimal_part", to_json(d.infinitesimal_part)},
          {"infinitesimal_text", to_string(d.infinitesimal_part)}};
}

json to_json(const Interval& i) { return {{"lo", i.lo}, {"hi", i.hi}}; }

json to_json(const LimitReport& r) {
  json j{{"kind", to_string(r.kind)}, {"tail_index", r.tail_index}, {"tolerance", r.tolerance}};
  if (r.kind == LimitReport::Kind::Converges) j["limit"] = r.limit;
  if (r.kind == LimitReport::Kind::Clusters) {
    j["clusters"] = json::array();
    for (const auto& i : r.clusters) j["clusters"].push_back(to_json(i));
  }
  return j;
}

json to_json(const StripReport& r) {
  if (r.inside) return {{"kind", "Strip"}, {"entry_index", r.entry_index}};
  return {{"kind", "Fail"}, {"first_violation_beyond", r.first_violation_beyond}};
}

json to_json(const ProbeReport& r) {
  return {{"kind", to_string(r.kind)}, {"x0", r.x0}, {"evidence", to_json(r.evidence)}};
}

json to_json(const IntervalProbeReport& r) {
  json samples = json::array();
  for (const auto& s : r.samples) samples.push_back(to_json(s));
  return {{"continuous", r.continuous}, {"samples", samples}};
}

json to_json(const SideLimit& s) {
  json j{{"kind", to_string(s.kind)}, {"samples", s.samples}};
  if (s.kind == SideLimit::Kind::Finite) j["value"] = s.value;
  if (s.kind == SideLimit::Kind::Clusters) j["cluster"] = to_json(s.cluster);
  return j;
}

json to_json(const OneSidedLimits& r) { return {{"left", to_json(r.left)}, {"right", to_json(r.right)}}; }

json to_json(const SumTheoremTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"n", r.n}, {"x", r.x}, {"s_n", r.partial}, {"s", r.limit}, {"error", r.error}});
  }
  json j{{"oracle", t.closed_form ? "closed_form" : "partial_sum"}, {"m_oracle", t.m_oracle}, {"rows", rows}};
  if (t.fixed_x) j["fixed_x"] = *t.fixed_x;
  return j;
}

json to_json(const FigureSpec& spec) {
  return {{"figure", spec.name},     {"function", spec.function}, {"center", spec.center},
          {"halfwidth", spec.halfwidth}, {"n_points", spec.n_points}, {"depth", spec.depth}};
}

std::string to_csv(const SumTheoremTable& t) {
  std::string out = "n,x,s_n,s,error\n";
  for (const auto& r : t.rows) {
    out += std::to_string(r.n) + "," + format_real(r.x) + "," + format_real(r.partial) + "," +
           format_real(r.limit) + "," + format_real(r.error) + "\n";
  }
  return out;
}

}  // namespace infinitesimal
