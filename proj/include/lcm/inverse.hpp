#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lcm/core.hpp"
#include "lcm/moments.hpp"

namespace lcm {

struct SolverConfig {
  double rel_tol = 1e-10;
  int max_iter = 200;
  int continuation_steps = 8;
  double damping_floor = 1e-6;
  /// relative distance to an envelope endpoint that counts as the boundary
  double boundary_tol = 1e-8;
  void validate() const;
};

enum class SolveStatus { Converged, ConvergedOnBoundary, Infeasible, NoConvergence };
const char* to_string(SolveStatus s);

struct SolveReport {
  std::optional<SimpleLogConcaveFn> solution;
  double residual = INF;  // max_i |m_i(f)/target_i - 1|
  int iterations = 0;
  SolveStatus status = SolveStatus::NoConvergence;
  std::vector<double> trace;  // max |log m_i - log target_i| per iteration
  std::string message;
};

enum class Feasibility { Interior, Boundary, Infeasible };
const char* to_string(Feasibility s);

enum class Pin { Free, Zero, Inf };

/// Slopes as a = exp(theta), then knot gaps g = exp(theta) with b_{i+1} = b_i + g.
/// Boundary values 0 / INF carry a pin flag and theta is ignored.
struct InternalCoords {
  SimpleClass cls;
  std::vector<double> theta;
  std::vector<Pin> pins;
  std::size_t n_slopes = 0;
};
InternalCoords internal_coords(const SimpleLogConcaveFn& f);
SimpleLogConcaveFn from_internal(const InternalCoords& c);

/// Both extremal solutions for the same constraints.
struct ChainResult {
  Feasibility status = Feasibility::Infeasible;
  std::optional<SolveReport> plus, minus;
  /// lower-order member realizing a boundary point
  std::optional<SimpleLogConcaveFn> boundary_fn;
  bool converged = true;
  std::string message;
};

ChainResult solve_chain(const ExponentTuple& p, const MomentVector& targets, const SolverConfig& cfg,
                        bool want_plus, bool want_minus);

SolveReport match_moments(Sign sign, const ExponentTuple& p, const MomentVector& targets,
                          const SolverConfig& cfg = {});

Feasibility feasibility(const ExponentTuple& p, const MomentVector& targets, const SolverConfig& cfg = {});

inline constexpr std::size_t kMaxConstraints = 12;

}  // namespace lcm
