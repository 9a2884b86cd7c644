#include "lcm/json_io.hpp"

#include <charconv>
#include <cmath>

namespace lcm {

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

json ext_to_json(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double ext_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return INF;
  }
  throw DomainError("expected a number or \"inf\", got " + j.dump());
}

namespace {

json ext_list(const std::vector<ExtReal>& v) {
  json a = json::array();
  for (ExtReal x : v) a.push_back(ext_to_json(x.value()));
  return a;
}

std::vector<ExtReal> ext_list_from(const json& j, const char* what) {
  if (!j.is_array()) throw DomainError(std::string(what) + " must be an array");
  std::vector<ExtReal> v;
  for (const json& x : j) v.emplace_back(ext_from_json(x));
  return v;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw DomainError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

const char* parity_name(Parity p) { return p == Parity::MaxIsPlus ? "MAX_IS_PLUS" : "MAX_IS_MINUS"; }

SolveStatus status_from(const std::string& s) {
  for (SolveStatus st : {SolveStatus::Converged, SolveStatus::ConvergedOnBoundary, SolveStatus::Infeasible,
                         SolveStatus::NoConvergence})
    if (s == to_string(st)) return st;
  throw DomainError("unknown solve status " + s);
}

}  // namespace

json to_json(const SimpleLogConcaveFn& f) {
  return {{"order", f.cls().order},
          {"sign", f.cls().sign == Sign::Plus ? "+" : "-"},
          {"slopes", ext_list(f.slopes())},
          {"knots", ext_list(f.knots())}};
}

json to_json(const PotentialSpec& f) {
  json pieces = json::array();
  for (const auto& pc : f.pieces) pieces.push_back({pc.slope, pc.knot});
  return {{"pieces", pieces}, {"cutoff", ext_to_json(f.cutoff.value())}};
}

json to_json(const MomentVector& m) { return ext_list(m.values()); }

json to_json(const SolveReport& r) {
  json t = json::array();
  for (double x : r.trace) t.push_back(ext_to_json(x));
  return {{"status", to_string(r.status)},
          {"solution", r.solution ? to_json(*r.solution) : json(nullptr)},
          {"residual", ext_to_json(r.residual)},
          {"iterations", r.iterations},
          {"trace", t},
          {"message", r.message}};
}

json to_json(const EnvelopeResult& r) {
  return {{"lo", ext_to_json(r.lo.value())},
          {"hi", ext_to_json(r.hi.value())},
          {"argmin", to_json(r.argmin)},
          {"argmax", to_json(r.argmax)},
          {"parity", parity_name(r.parity)},
          {"status", to_string(r.status)}};
}

json to_json(const BodyMembership& b) {
  return {{"status", to_string(b.status)}, {"realizer", b.realizer ? to_json(*b.realizer) : json(nullptr)}};
}

json to_json(const KhintchineConstants& k) {
  return {{"p", ext_to_json(k.p)},
          {"q", ext_to_json(k.q)},
          {"n", k.n ? json(*k.n) : json("inf")},
          {"A", ext_to_json(k.A)},
          {"B", ext_to_json(k.B)},
          {"A_sharp", k.A_sharp},
          {"B_sharp", k.B_sharp}};
}

json to_json(const TestVerdict& v) {
  return {{"name", v.name},
          {"pass", v.pass},
          {"margin", ext_to_json(v.margin)},
          {"control_rejected", v.control_rejected},
          {"detail", v.detail}};
}

json to_json(const McEstimate& m) {
  return {{"mean", ext_to_json(m.mean)}, {"std_err", ext_to_json(m.std_err)}, {"n_samples", m.n_samples},
          {"seed", m.seed}};
}

SimpleLogConcaveFn simple_fn_from_json(const json& j) {
  const json& o = field(j, "order");
  if (!o.is_number_integer()) throw DomainError("\"order\" must be an integer");
  const json& s = field(j, "sign");
  Sign sign = Sign::Plus;
  if (s == "-")
    sign = Sign::Minus;
  else if (s != "+")
    throw DomainError("\"sign\" must be \"+\" or \"-\"");
  return SimpleLogConcaveFn({o.get<int>(), sign}, ext_list_from(field(j, "slopes"), "slopes"),
                            ext_list_from(field(j, "knots"), "knots"));
}

PotentialSpec potential_from_json(const json& j) {
  const json& ps = field(j, "pieces");
  if (!ps.is_array()) throw DomainError("\"pieces\" must be an array");
  std::vector<PotentialSpec::Piece> pieces;
  for (const json& pc : ps) {
    if (!pc.is_array() || pc.size() != 2) throw DomainError("each piece is [slope, knot]");
    pieces.push_back({ext_from_json(pc[0]), ext_from_json(pc[1])});
  }
  const ExtReal cut = j.contains("cutoff") ? ExtReal(ext_from_json(j.at("cutoff"))) : ExtReal::inf();
  return PotentialSpec(std::move(pieces), cut);
}

AnyFn any_fn_from_json(const json& j) {
  if (j.is_object() && j.contains("pieces")) return potential_from_json(j);
  return simple_fn_from_json(j);
}

SolveReport solve_report_from_json(const json& j) {
  SolveReport r;
  r.status = status_from(field(j, "status").get<std::string>());
  if (!field(j, "solution").is_null()) r.solution = simple_fn_from_json(j.at("solution"));
  r.residual = ext_from_json(field(j, "residual"));
  r.iterations = field(j, "iterations").get<int>();
  for (const json& x : field(j, "trace")) r.trace.push_back(ext_from_json(x));
  r.message = j.value("message", "");
  return r;
}

std::string dump(const json& j) { return j.dump(2); }

}  // namespace lcm
