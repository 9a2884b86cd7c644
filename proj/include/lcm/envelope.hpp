#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lcm/chebyshev.hpp"
#include "lcm/inverse.hpp"

namespace lcm {

struct EnvelopeResult {
  ExtReal lo, hi;
  SimpleLogConcaveFn argmin = SimpleLogConcaveFn::point_mass();
  SimpleLogConcaveFn argmax = SimpleLogConcaveFn::point_mass();
  Parity parity = Parity::MaxIsPlus;
  Feasibility status = Feasibility::Interior;
};

/// Sharp range of m_{n+1} over L given m_1..m_n. Throws InfeasibleError.
EnvelopeResult envelope(const ExponentTuple& p, const MomentVector& constraints, const SolverConfig& cfg = {});

struct BodyMembership {
  Feasibility status;
  /// lower-order member realizing a boundary point
  std::optional<SimpleLogConcaveFn> realizer;
};
BodyMembership body_contains(const ExponentTuple& p, const MomentVector& m, const SolverConfig& cfg = {});

struct GridRow {
  MomentVector constraints;
  double lo, hi;  // NaN on rows without a result
  std::string status;  // Interior, Boundary, Infeasible, NoConvergence, Error
};

/// One row per grid point, in input order. `axis` names the coordinate being swept;
/// it only has to index a constraint.
std::vector<GridRow> envelope_grid(const ExponentTuple& p, std::size_t axis, const std::vector<MomentVector>& grid,
                                   const SolverConfig& cfg = {}, unsigned workers = 0);

/// base with coordinate `axis` replaced by each value.
std::vector<MomentVector> axis_grid(const MomentVector& base, std::size_t axis, const std::vector<double>& values);

std::string grid_csv(const std::vector<GridRow>& rows, std::size_t n);

}  // namespace lcm
