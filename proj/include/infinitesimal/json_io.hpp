#pragma once

// JSON mirrors of the report types and CSV tables.

#include <string>

#include <json.hpp>

#include "infinitesimal/laurent.hpp"
#include "infinitesimal/sequences.hpp"
#include "infinitesimal/svg.hpp"

namespace infinitesimal {

/// {"valuation": int, "order": int, "coeffs": [real...]}
nlohmann::json to_json(const LaurentNumber& x);
LaurentNumber laurent_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Decomposition& d);
nlohmann::json to_json(const Interval& i);
nlohmann::json to_json(const LimitReport& r);
nlohmann::json to_json(const StripReport& r);
nlohmann::json to_json(const ProbeReport& r);
nlohmann::json to_json(const IntervalProbeReport& r);
nlohmann::json to_json(const SideLimit& s);
nlohmann::json to_json(const OneSidedLimits& r);
nlohmann::json to_json(const SumTheoremTable& t);
nlohmann::json to_json(const FigureSpec& spec);

/// Header row then one row per n; '.' decimal separator regardless of locale.
std::string to_csv(const SumTheoremTable& t);

}  // namespace infinitesimal
