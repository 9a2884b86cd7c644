#pragma once

#include <string>

#include <json.hpp>

#include "lcm/core.hpp"
#include "lcm/envelope.hpp"
#include "lcm/inverse.hpp"
#include "lcm/khintchine.hpp"
#include "lcm/moments.hpp"
#include "lcm/verify.hpp"

namespace lcm {

using json = nlohmann::json;

/// Shortest decimal string that reads back to the same double; "inf" for INF.
std::string format_number(double x);

/// INF becomes the string "inf"; NaN becomes null.
json ext_to_json(double x);
/// Accepts numbers and the strings "inf" / "infinity". Throws DomainError.
double ext_from_json(const json& j);

json to_json(const SimpleLogConcaveFn& f);
json to_json(const PotentialSpec& f);
json to_json(const MomentVector& m);
json to_json(const SolveReport& r);
json to_json(const EnvelopeResult& r);
json to_json(const BodyMembership& b);
json to_json(const KhintchineConstants& k);
json to_json(const TestVerdict& v);
json to_json(const McEstimate& m);

SimpleLogConcaveFn simple_fn_from_json(const json& j);
PotentialSpec potential_from_json(const json& j);
/// Objects with "pieces" are PotentialSpecs, everything else a simple function.
AnyFn any_fn_from_json(const json& j);
SolveReport solve_report_from_json(const json& j);

/// Pretty-printed, with INF written as "inf".
std::string dump(const json& j);

}  // namespace lcm
