#include "lcm/envelope.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "lcm/json_io.hpp"
#include "lcm/moments.hpp"

namespace lcm {

EnvelopeResult envelope(const ExponentTuple& p, const MomentVector& constraints, const SolverConfig& cfg) {
  const std::size_t n = constraints.size();
  if (n == 0) throw DomainError("envelope needs at least one constraint");
  if (p.size() != n + 1) throw DomainError("envelope needs exactly one more exponent than constraints");
  const ChainResult cr = solve_chain(p.prefix(n), constraints, cfg, true, true);
  if (cr.status == Feasibility::Infeasible) throw InfeasibleError(cr.message);
  if (!cr.converged) throw NonConvergence(cr.message);

  EnvelopeResult r;
  r.parity = parity_rule(p);
  r.status = cr.status;
  const double pn = p[n];
  if (cr.status == Feasibility::Boundary) {
    r.argmin = r.argmax = *cr.boundary_fn;
    r.lo = r.hi = moment(*cr.boundary_fn, pn);
    return r;
  }
  const SimpleLogConcaveFn& fp = *cr.plus->solution;
  const SimpleLogConcaveFn& fm = *cr.minus->solution;
  const ExtReal mp = moment(fp, pn), mm = moment(fm, pn);
  if (r.parity == Parity::MaxIsPlus) {
    r.argmax = fp;
    r.argmin = fm;
    r.hi = mp;
    r.lo = mm;
  } else {
    r.argmax = fm;
    r.argmin = fp;
    r.hi = mm;
    r.lo = mp;
  }
  return r;
}

BodyMembership body_contains(const ExponentTuple& p, const MomentVector& m, const SolverConfig& cfg) {
  const ChainResult cr = solve_chain(p, m, cfg, false, false);
  if (!cr.converged) throw NonConvergence("body_contains: " + cr.message);
  return {cr.status, cr.boundary_fn};
}

std::vector<GridRow> envelope_grid(const ExponentTuple& p, std::size_t axis, const std::vector<MomentVector>& grid,
                                   const SolverConfig& cfg, unsigned workers) {
  if (p.size() < 2) throw DomainError("envelope_grid needs at least two exponents");
  const std::size_t n = p.size() - 1;
  if (axis >= n) throw DomainError("envelope_grid axis out of range");
  cfg.validate();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<GridRow> rows(grid.size());
  auto one = [&](std::size_t i) {
    GridRow& row = rows[i];
    row.constraints = grid[i];
    row.lo = row.hi = nan;
    try {
      if (grid[i].size() != n) throw DomainError("grid point has the wrong number of constraints");
      const EnvelopeResult e = envelope(p, grid[i], cfg);
      row.lo = e.lo;
      row.hi = e.hi;
      row.status = to_string(e.status);
    } catch (const InfeasibleError&) {
      row.status = "Infeasible";
    } catch (const NonConvergence&) {
      row.status = "NoConvergence";
    } catch (const Error&) {
      row.status = "Error";
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, grid.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) one(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < grid.size();) one(i);
    });
  for (auto& t : pool) t.join();
  return rows;
}

std::vector<MomentVector> axis_grid(const MomentVector& base, std::size_t axis, const std::vector<double>& values) {
  if (axis >= base.size()) throw DomainError("axis_grid axis out of range");
  std::vector<MomentVector> out;
  out.reserve(values.size());
  for (double v : values) {
    std::vector<ExtReal> m = base.values();
    m[axis] = v;
    out.emplace_back(std::move(m));
  }
  return out;
}

std::string grid_csv(const std::vector<GridRow>& rows, std::size_t n) {
  std::string s;
  for (std::size_t i = 1; i <= n; ++i) s += "m_" + std::to_string(i) + ",";
  s += "lo,hi,status\n";
  for (const GridRow& r : rows) {
    for (std::size_t i = 0; i < n; ++i) s += (i < r.constraints.size() ? format_number(r.constraints[i]) : "") + ",";
    s += (std::isnan(r.lo) ? "" : format_number(r.lo)) + ",";
    s += (std::isnan(r.hi) ? "" : format_number(r.hi)) + ",";
    s += r.status + "\n";
  }
  return s;
}

}  // namespace lcm
