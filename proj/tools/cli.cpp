#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lcm/envelope.hpp"
#include "lcm/json_io.hpp"
#include "lcm/khintchine.hpp"
#include "lcm/moments.hpp"
#include "lcm/verify.hpp"

namespace lcm::cli {

namespace {

double parse_number(const std::string& s) {
  if (s == "inf" || s == "INF" || s == "Infinity" || s == "infinity") return INF;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DomainError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw DomainError("not a number: '" + s + "'");
  return v;
}

std::vector<double> parse_numbers(const std::vector<std::string>& v) {
  std::vector<double> out;
  for (const auto& s : v) out.push_back(parse_number(s));
  return out;
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("LCM_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw DomainError("LCM_SEED is not an unsigned integer");
    }
  }
  return 12345;
}

struct Config {
  std::vector<std::string> exponents, targets, p, q, n, values;
  std::string sign, fn, fn_file, check, format = "json", output;
  double rel_tol = 1e-10;
  int max_iter = 200, continuation_steps = 8;
  std::size_t axis = 0;
  std::uint64_t seed = 0, samples = 1000000;
  unsigned workers = 0;
  bool asymptotic = false;
};

SolverConfig solver_config(const Config& c) {
  SolverConfig s;
  s.rel_tol = c.rel_tol;
  s.max_iter = c.max_iter;
  s.continuation_steps = c.continuation_steps;
  s.validate();
  return s;
}

AnyFn read_fn(const Config& c) {
  std::string text = c.fn;
  if (!c.fn_file.empty()) {
    std::ifstream in(c.fn_file);
    if (!in) throw DomainError("cannot read " + c.fn_file);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  if (text.empty()) throw DomainError("moments needs --fn or --fn-file");
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("bad JSON: ") + e.what());
  }
  return any_fn_from_json(j);
}

int solve_exit(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged:
    case SolveStatus::ConvergedOnBoundary:
      return kOk;
    case SolveStatus::Infeasible:
      return kInfeasible;
    case SolveStatus::NoConvergence:
      return kNoConvergence;
  }
  return kNoConvergence;
}

std::string csv_cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_number(v.get<double>());
  return "";
}

/// Flat array of objects to CSV, columns from the first row.
std::string to_csv(const json& rows) {
  std::string s;
  if (rows.empty()) return s;
  std::vector<std::string> cols;
  for (auto it = rows[0].begin(); it != rows[0].end(); ++it) cols.push_back(it.key());
  for (std::size_t i = 0; i < cols.size(); ++i) s += (i ? "," : "") + cols[i];
  s += "\n";
  for (const json& r : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      std::string cell = r.contains(cols[i]) ? csv_cell(r.at(cols[i])) : "";
      if (cell.find_first_of(",\"\n") != std::string::npos) {
        std::string q = "\"";
        for (char ch : cell) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        cell = q + "\"";
      }
      s += (i ? "," : "") + cell;
    }
    s += "\n";
  }
  return s;
}

int cmd_moments(const Config& c, std::string& out) {
  const AnyFn f = read_fn(c);
  const ExponentTuple p(parse_numbers(c.exponents));
  const MomentVector m = moment_map(f, p);
  out = dump({{"exponents", p.values()}, {"moments", to_json(m)}});
  return kOk;
}

int cmd_invert(const Config& c, std::string& out) {
  if (c.sign != "+" && c.sign != "-") throw DomainError("--sign must be + or -");
  const SolveReport r = match_moments(c.sign == "+" ? Sign::Plus : Sign::Minus, ExponentTuple(parse_numbers(c.exponents)),
                                      MomentVector(parse_numbers(c.targets)), solver_config(c));
  out = dump(to_json(r));
  return solve_exit(r.status);
}

int cmd_envelope(const Config& c, std::string& out) {
  const EnvelopeResult r =
      envelope(ExponentTuple(parse_numbers(c.exponents)), MomentVector(parse_numbers(c.targets)), solver_config(c));
  out = dump(to_json(r));
  return kOk;
}

int cmd_body(const Config& c, std::string& out) {
  const BodyMembership b =
      body_contains(ExponentTuple(parse_numbers(c.exponents)), MomentVector(parse_numbers(c.targets)), solver_config(c));
  out = dump(to_json(b));
  return kOk;
}

int cmd_khintchine(const Config& c, std::string& out) {
  const std::vector<double> ps = parse_numbers(c.p), qs = parse_numbers(c.q);
  if (ps.empty() || qs.empty()) throw DomainError("khintchine needs --p and --q");
  std::vector<int> ns;
  for (const auto& s : c.n) {
    const double v = parse_number(s);
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e9) {
      if (std::isinf(v)) continue;
      throw DomainError("--n takes positive integers or inf");
    }
    ns.push_back(static_cast<int>(v));
  }
  const bool asym = c.asymptotic || ns.empty() ||
                    std::any_of(c.n.begin(), c.n.end(), [](const std::string& s) { return std::isinf(parse_number(s)); });
  json rows = json::array();
  for (double p : ps)
    for (double q : qs) {
      for (int n : ns) rows.push_back(to_json(constants_fixed_n(p, q, n)));
      if (asym) rows.push_back(to_json(constants_asymptotic(p, q)));
    }
  out = c.format == "csv" ? to_csv(rows) : dump(rows);
  return kOk;
}

int cmd_verify(const Config& c, std::string& out) {
  SuiteOptions opt;
  opt.seed = c.seed;
  opt.mc_samples = c.samples;
  opt.workers = c.workers;
  std::vector<TestVerdict> vs;
  if (c.check.empty() || c.check == "all") {
    vs = run_suite(opt);
  } else {
    const auto names = check_names();
    if (std::find(names.begin(), names.end(), c.check) == names.end()) throw DomainError("unknown check " + c.check);
    vs = run_check(c.check, opt);
  }
  json rows = json::array();
  bool ok = true;
  for (const TestVerdict& v : vs) {
    rows.push_back(to_json(v));
    ok = ok && v.pass;
  }
  if (c.format == "csv")
    out = to_csv(rows);
  else
    out = dump({{"seed", c.seed}, {"mc_samples", c.samples}, {"pass", ok}, {"checks", rows}});
  return ok ? kOk : kVerifyFailed;
}

int cmd_grid(const Config& c, std::string& out) {
  const ExponentTuple p(parse_numbers(c.exponents));
  const MomentVector base(parse_numbers(c.targets));
  const auto rows = envelope_grid(p, c.axis, axis_grid(base, c.axis, parse_numbers(c.values)), solver_config(c),
                                  c.workers);
  if (c.format == "json") {
    json a = json::array();
    for (const GridRow& r : rows)
      a.push_back({{"constraints", to_json(r.constraints)},
                   {"lo", ext_to_json(r.lo)},
                   {"hi", ext_to_json(r.hi)},
                   {"status", r.status}});
    out = dump(a);
  } else {
    out = grid_csv(rows, base.size());
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symmetric log-concave moment problems and Khintchine constants for l_q^n balls"};
  app.require_subcommand(1);
  Config c;
  try {
    c.seed = default_seed();
  } catch (const Error& e) {
    err << "lcm: " << e.what() << "\n";
    return kBadInput;
  }
  auto add_out = [&](CLI::App* s, bool csv) {
    s->add_option("-o,--output", c.output, "write machine output to a file");
    s->add_option("--format", c.format, "json or csv")->check(CLI::IsMember(csv ? std::vector<std::string>{"json", "csv"}
                                                                                 : std::vector<std::string>{"json"}));
  };
  auto add_solver = [&](CLI::App* s) {
    s->add_option("--exponents", c.exponents, "exponent tuple p_1 ... p_n")->required();
    s->add_option("--targets", c.targets, "moment targets (numbers or inf)")->required();
    s->add_option("--rel-tol", c.rel_tol, "relative moment tolerance");
    s->add_option("--max-iter", c.max_iter, "Newton iterations per stage");
    s->add_option("--continuation-steps", c.continuation_steps, "homotopy steps per stage");
  };

  auto* moments = app.add_subcommand("moments", "moment vector of a JSON-described function");
  moments->add_option("--fn", c.fn, "function descriptor (JSON)");
  moments->add_option("--fn-file", c.fn_file, "file holding the descriptor");
  moments->add_option("--exponents", c.exponents, "exponents")->required();
  add_out(moments, false);

  auto* invert = app.add_subcommand("invert", "match a moment vector inside L_n^+ or L_n^-");
  invert->add_option("--sign", c.sign, "+ or -")->required();
  add_solver(invert);
  add_out(invert, false);

  auto* env = app.add_subcommand("envelope", "sharp range of the last moment given the others");
  add_solver(env);
  add_out(env, false);

  auto* body = app.add_subcommand("body", "moment body membership");
  add_solver(body);
  add_out(body, false);

  auto* kh = app.add_subcommand("khintchine", "moment comparison constants on l_q^n balls");
  kh->add_option("--p", c.p, "p values")->required();
  kh->add_option("--q", c.q, "q values (inf allowed)")->required();
  kh->add_option("--n", c.n, "dimensions (inf for the supremum over n)");
  kh->add_flag("--asymptotic", c.asymptotic, "include the n -> inf row");
  add_out(kh, true);

  auto* ver = app.add_subcommand("verify", "numerical checks of the comparison theorems");
  ver->add_option("--check", c.check, "one check name, default all");
  ver->add_option("--seed", c.seed, "master seed (default $LCM_SEED or 12345)");
  ver->add_option("--samples", c.samples, "Monte Carlo samples per estimate");
  ver->add_option("--workers", c.workers, "threads, 0 = hardware");
  add_out(ver, true);

  auto* grid = app.add_subcommand("grid", "envelope along one constraint axis, CSV");
  add_solver(grid);
  grid->add_option("--axis", c.axis, "0-based constraint index to sweep")->required();
  grid->add_option("--values", c.values, "values for that coordinate")->required();
  grid->add_option("--workers", c.workers, "threads, 0 = hardware");
  c.format = "json";
  add_out(grid, true);
  grid->callback([&] {
    if (grid->count("--format") == 0) c.format = "csv";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kBadInput;
  }

  std::string text;
  int code = kOk;
  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "moments")
      code = cmd_moments(c, text);
    else if (name == "invert")
      code = cmd_invert(c, text);
    else if (name == "envelope")
      code = cmd_envelope(c, text);
    else if (name == "body")
      code = cmd_body(c, text);
    else if (name == "khintchine")
      code = cmd_khintchine(c, text);
    else if (name == "verify")
      code = cmd_verify(c, text);
    else
      code = cmd_grid(c, text);
  } catch (const InfeasibleError& e) {
    err << "lcm: infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const NonConvergence& e) {
    err << "lcm: no convergence: " << e.what() << "\n";
    return kNoConvergence;
  } catch (const Error& e) {
    err << "lcm: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    err << "lcm: " << e.what() << "\n";
    return kBadInput;
  }
  if (!text.empty() && text.back() != '\n') text += "\n";
  if (!c.output.empty()) {
    std::ofstream f(c.output);
    if (!f) {
      err << "lcm: cannot write " << c.output << "\n";
      return kBadInput;
    }
    f << text;
  } else {
    out << text;
  }
  if (code == kInfeasible) err << "lcm: targets lie outside the moment body\n";
  if (code == kNoConvergence) err << "lcm: solver did not converge\n";
  if (code == kVerifyFailed) err << "lcm: some checks failed\n";
  return code;
}

}  // namespace lcm::cli
