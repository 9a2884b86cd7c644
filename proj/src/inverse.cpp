#include "lcm/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "lcm/specfun.hpp"

namespace lcm {

void SolverConfig::validate() const {
  if (!(rel_tol > 0.0) || max_iter <= 0 || continuation_steps <= 0 || !(damping_floor > 0.0) ||
      !(boundary_tol > 0.0))
    throw DomainError("SolverConfig fields must all be positive");
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::ConvergedOnBoundary: return "ConvergedOnBoundary";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::NoConvergence: return "NoConvergence";
  }
  return "?";
}

const char* to_string(Feasibility s) {
  switch (s) {
    case Feasibility::Interior: return "Interior";
    case Feasibility::Boundary: return "Boundary";
    case Feasibility::Infeasible: return "Infeasible";
  }
  return "?";
}

// ---------------------------------------------------------------- coordinates

InternalCoords internal_coords(const SimpleLogConcaveFn& f) {
  InternalCoords c;
  c.cls = f.cls();
  c.n_slopes = f.slopes().size();
  for (ExtReal a : f.slopes()) {
    if (a.is_zero()) {
      c.theta.push_back(0.0);
      c.pins.push_back(Pin::Zero);
    } else if (a.is_inf()) {
      c.theta.push_back(0.0);
      c.pins.push_back(Pin::Inf);
    } else {
      c.theta.push_back(std::log(a.value()));
      c.pins.push_back(Pin::Free);
    }
  }
  double prev = 0.0;
  for (ExtReal b : f.knots()) {
    if (b.is_inf()) {
      c.theta.push_back(0.0);
      c.pins.push_back(Pin::Inf);
    } else if (b.value() == prev) {
      c.theta.push_back(0.0);
      c.pins.push_back(Pin::Zero);
    } else {
      c.theta.push_back(std::log(b.value() - prev));
      c.pins.push_back(Pin::Free);
    }
    prev = b.value();
  }
  return c;
}

SimpleLogConcaveFn from_internal(const InternalCoords& c) {
  std::vector<ExtReal> slopes, knots;
  for (std::size_t i = 0; i < c.n_slopes; ++i) {
    switch (c.pins[i]) {
      case Pin::Zero: slopes.emplace_back(0.0); break;
      case Pin::Inf: slopes.push_back(ExtReal::inf()); break;
      case Pin::Free: slopes.emplace_back(std::exp(c.theta[i])); break;
    }
  }
  double prev = 0.0;
  for (std::size_t i = c.n_slopes; i < c.theta.size(); ++i) {
    switch (c.pins[i]) {
      case Pin::Zero: break;
      case Pin::Inf: prev = INF; break;
      case Pin::Free: prev += std::exp(c.theta[i]); break;
    }
    knots.emplace_back(prev);
  }
  return {c.cls, std::move(slopes), std::move(knots)};
}

// ---------------------------------------------------------------- damped Newton

namespace {

struct Problem {
  std::vector<double> p;
  std::vector<double> logT;
  double logL;  // length scale of the targets, used to place pins and perturbations
};

bool residual(const InternalCoords& c, const Problem& pb, int neq, Eigen::VectorXd& r) {
  const Profile pr = from_internal(c).profile();
  r.resize(neq);
  for (int i = 0; i < neq; ++i) {
    const double m = moment(pr, pb.p[static_cast<std::size_t>(i)]);
    if (!(m > 0.0) || !std::isfinite(m)) return false;
    r[i] = std::log(m) - pb.logT[static_cast<std::size_t>(i)];
  }
  return true;
}

struct LmOptions {
  int neq;
  std::vector<char> frozen;
  double tol;
  int max_iter;
  bool polish;
  double mu_floor;
};

struct LmResult {
  bool converged;
  double resid;
  int iters;
};

double physical(const InternalCoords& x, const Problem& pb, std::size_t i) {
  return i < x.n_slopes ? x.theta[i] + pb.logL : x.theta[i] - pb.logL;
}

// Central-difference Jacobian of the first neq residuals in the coordinates u.
// A column whose both neighbours are infeasible is zero when allow_missing is set, else the call fails.
bool jacobian(const InternalCoords& x, const Problem& pb, int neq, const std::vector<std::size_t>& u,
              Eigen::VectorXd& r, Eigen::MatrixXd& J, bool allow_missing = false) {
  if (!residual(x, pb, neq, r)) return false;
  constexpr double h = 1e-6;
  J.resize(neq, static_cast<Eigen::Index>(u.size()));
  for (std::size_t k = 0; k < u.size(); ++k) {
    InternalCoords xp = x, xm = x;
    xp.theta[u[k]] += h;
    xm.theta[u[k]] -= h;
    Eigen::VectorXd rp, rm;
    const bool okp = residual(xp, pb, neq, rp), okm = residual(xm, pb, neq, rm);
    const auto col = static_cast<Eigen::Index>(k);
    if (okp && okm)
      J.col(col) = (rp - rm) / (2 * h);
    else if (okp)
      J.col(col) = (rp - r) / h;
    else if (okm)
      J.col(col) = (r - rm) / h;
    else if (allow_missing)
      J.col(col).setZero();
    else
      return false;
  }
  return true;
}

LmResult lm_solve(InternalCoords& x, const Problem& pb, const LmOptions& o, std::vector<double>* trace) {
  Eigen::VectorXd r;
  if (!residual(x, pb, o.neq, r)) return {false, INF, 0};
  double mu = o.mu_floor;
  int polished = 0;
  double prev_nr = INF;
  int it = 0;
  for (; it < o.max_iter; ++it) {
    const double nr = r.cwiseAbs().maxCoeff();
    if (trace) trace->push_back(nr);
    if (nr <= o.tol) {
      // polish: keep going while the residual still falls, a few steps at most
      if (!o.polish || nr < 1e-15 || (polished > 0 && nr >= prev_nr) || polished >= 8) return {true, nr, it};
      ++polished;
    }
    prev_nr = nr;

    std::vector<std::size_t> u;
    for (std::size_t i = 0; i < x.theta.size(); ++i)
      if (x.pins[i] == Pin::Free && !(i < o.frozen.size() && o.frozen[i])) u.push_back(i);
    if (u.empty()) return {nr <= o.tol, nr, it};

    const auto m = static_cast<Eigen::Index>(u.size());
    Eigen::MatrixXd J;
    jacobian(x, pb, o.neq, u, r, J, true);
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    const double dmax = std::max(A.diagonal().maxCoeff(), 1e-300);

    bool accepted = false;
    // the undamped Gauss-Newton step goes first: the damping floor would otherwise stall
    // progress along weakly determined directions
    for (int tries = -1; tries < 10 && !accepted; ++tries) {
      Eigen::VectorXd step;
      if (tries < 0) {
        step = J.completeOrthogonalDecomposition().solve(-r);
      } else {
        Eigen::MatrixXd M = A;
        for (Eigen::Index d = 0; d < m; ++d) M(d, d) += mu * std::max(A(d, d), 1e-12 * dmax);
        step = M.ldlt().solve(-g);
      }
      if (!step.allFinite()) {
        if (tries >= 0) mu *= 10;
        continue;
      }
      // large log-coordinate steps act multiplicatively; compress them so a slope near 0 can
      // grow by the linearized factor instead of being backtracked to nothing
      for (Eigen::Index k = 0; k < m; ++k)
        if (std::abs(step[k]) > 1.0) step[k] = std::copysign(1.0 + std::log(std::abs(step[k])), step[k]);
      double t = 1.0;
      for (int bt = 0; bt < (tries < 0 ? 4 : 30); ++bt, t *= 0.5) {
        InternalCoords trial = x;
        for (Eigen::Index k = 0; k < m; ++k) trial.theta[u[static_cast<std::size_t>(k)]] += t * step[k];
        Eigen::VectorXd rt;
        if (residual(trial, pb, o.neq, rt) && rt.norm() < r.norm()) {
          x = std::move(trial);
          r = std::move(rt);
          accepted = true;
          break;
        }
      }
      if (!accepted && tries >= 0) mu *= 10;
    }
    if (!accepted) return {nr <= o.tol, nr, it};
    mu = std::max(o.mu_floor, mu * 0.3);

    // a parameter that ran off to a facet is pinned there
    bool pinned = false;
    for (std::size_t i : u) {
      const double ph = physical(x, pb, i);
      if (ph > 40.0 || ph < -40.0) {
        x.pins[i] = ph > 0 ? Pin::Inf : Pin::Zero;
        pinned = true;
      }
    }
    if (pinned && !residual(x, pb, o.neq, r)) return {false, INF, it};
  }
  const double nr = r.cwiseAbs().maxCoeff();
  return {nr <= o.tol, nr, it};
}

// Move pinned coordinate c into the interior so that log m_j changes by about delta.
bool perturb(InternalCoords& x, std::size_t c, const Problem& pb, int j, double delta) {
  Eigen::VectorXd rb;
  if (!residual(x, pb, j, rb)) return false;
  const bool slope = c < x.n_slopes;
  const double center = slope ? -pb.logL : pb.logL;
  const double dir = x.pins[c] == Pin::Zero ? -1.0 : 1.0;
  auto at = [&](double d) {
    InternalCoords t = x;
    t.pins[c] = Pin::Free;
    t.theta[c] = center + dir * d;
    return t;
  };
  auto change = [&](double d) {
    Eigen::VectorXd r;
    if (!residual(at(d), pb, j, r)) return INF;
    return std::abs(r[j - 1] - rb[j - 1]);
  };
  double dlo = 0.0, clo = change(0.0);
  if (clo == 0.0) return false;
  if (clo <= delta) {
    x = at(0.0);
    return true;
  }
  double dhi = 0.5, chi = change(dhi);
  while (chi > delta) {
    dlo = dhi;
    clo = chi;
    dhi *= 2.0;
    if (dhi > 2048.0) return false;
    chi = change(dhi);
  }
  if (chi == 0.0) {
    for (int k = 0; k < 60 && (chi == 0.0 || chi < 0.25 * delta); ++k) {
      const double dm = 0.5 * (dlo + dhi);
      const double cm = change(dm);
      if (cm > delta) {
        dlo = dm;
        clo = cm;
      } else {
        dhi = dm;
        chi = cm;
      }
    }
  }
  for (int k = 0; k < 60 && chi < 0.25 * delta; ++k) {
    const double dm = 0.5 * (dlo + dhi);
    const double cm = change(dm);
    if (cm > delta) {
      dlo = dm;
      clo = cm;
    } else {
      dhi = dm;
      chi = cm;
    }
  }
  if (chi == 0.0) return false;
  x = at(dhi);
  return true;
}

struct StageOut {
  bool ok = false;
  InternalCoords x;
  double resid = INF;
  int iters = 0;
  std::vector<double> trace;
};

bool homotopy(InternalCoords& x, const Problem& pb, int j, const SolverConfig& cfg, StageOut& out) {
  Eigen::VectorXd r;
  if (!residual(x, pb, j, r)) return false;
  const double logm0 = r[j - 1] + pb.logT[static_cast<std::size_t>(j - 1)];
  const double logTj = pb.logT[static_cast<std::size_t>(j - 1)];
  Problem ph = pb;
  const double full = 1.0 / cfg.continuation_steps;
  double tau = 0.0, dt = full;
  while (tau < 1.0) {
    const double tn = std::min(1.0, tau + dt);
    const bool last = tn >= 1.0;
    ph.logT[static_cast<std::size_t>(j - 1)] = last ? logTj : logm0 + tn * (logTj - logm0);
    InternalCoords xt = x;
    const LmOptions o{j, {}, last ? cfg.rel_tol : 1e-8, last ? cfg.max_iter : std::min(cfg.max_iter, 40), last,
                      cfg.damping_floor};
    const LmResult lr = lm_solve(xt, ph, o, &out.trace);
    out.iters += lr.iters;
    if (lr.converged) {
      x = std::move(xt);
      tau = tn;
      out.resid = lr.resid;
      dt = std::min(full, 2.0 * dt);
    } else {
      dt *= 0.5;
      if (dt < full / 256.0) return false;
    }
  }
  return true;
}

// Follow the curve {m_1..m_{j-1} fixed} from the released pin c by pseudo-arclength
// continuation until the residual of constraint j changes sign, then refine the crossing.
// m_j is monotone along the curve; the released coordinate itself need not be.
bool march(InternalCoords& x, std::size_t c, const Problem& pb, int j, double r0, const SolverConfig& cfg,
           StageOut& out) {
  const double dir = x.pins[c] == Pin::Zero ? -1.0 : 1.0;
  if (!perturb(x, c, pb, j, std::max(1e-4 * std::abs(r0), 1e-13))) return false;
  {
    std::vector<char> frozen(x.theta.size(), 0);
    frozen[c] = 1;
    const LmResult lr = lm_solve(x, pb, {j - 1, frozen, 1e-13, cfg.max_iter, false, cfg.damping_floor}, &out.trace);
    out.iters += lr.iters;
    if (!lr.converged || x.pins[c] != Pin::Free) return false;
  }
  std::vector<std::size_t> u;
  for (std::size_t i = 0; i < x.theta.size(); ++i)
    if (x.pins[i] == Pin::Free) u.push_back(i);
  const auto nu = static_cast<Eigen::Index>(u.size());
  const auto ci = static_cast<Eigen::Index>(std::find(u.begin(), u.end(), c) - u.begin());
  const int ncon = j - 1;

  struct Point {
    InternalCoords x;
    Eigen::VectorXd t;  // unit tangent
    double g;           // residual of constraint j
  };
  auto tangent = [&](const InternalCoords& y, const Eigen::VectorXd* prev, Eigen::VectorXd& t) {
    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    if (ncon == 0) {
      t = Eigen::VectorXd::Zero(nu);
      t[ci] = -dir;
      return true;
    }
    if (!jacobian(y, pb, ncon, u, r, J)) return false;
    Eigen::JacobiSVD<Eigen::MatrixXd> sv(J, Eigen::ComputeFullV);
    t = sv.matrixV().col(nu - 1);
    if (prev ? t.dot(*prev) < 0.0 : t[ci] * dir > 0.0) t = -t;
    return true;
  };
  // predictor y + sigma t, Newton corrector on the hyperplane orthogonal to t
  auto correct = [&](const Point& from, double sigma, Point& to) {
    to.x = from.x;
    for (Eigen::Index k = 0; k < nu; ++k) to.x.theta[u[static_cast<std::size_t>(k)]] += sigma * from.t[k];
    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    bool ok = false;
    for (int it = 0; it < 12; ++it) {
      ++out.iters;
      if (ncon == 0) {
        ok = true;
        break;
      }
      if (!jacobian(to.x, pb, ncon, u, r, J)) return false;
      if (r.cwiseAbs().maxCoeff() <= 2e-14) {
        ok = true;
        break;
      }
      Eigen::MatrixXd A(nu, nu);
      A.topRows(ncon) = J;
      A.row(nu - 1) = from.t.transpose();
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nu);
      rhs.head(ncon) = -r;
      const Eigen::VectorXd d = A.partialPivLu().solve(rhs);
      if (!d.allFinite() || d.cwiseAbs().maxCoeff() > 0.5 * std::abs(sigma) + 1e-3) return false;
      for (Eigen::Index k = 0; k < nu; ++k) to.x.theta[u[static_cast<std::size_t>(k)]] += d[k];
    }
    if (!ok) return false;
    for (std::size_t i : u)
      if (std::abs(physical(to.x, pb, i)) > 40.0) return false;  // ran into another facet
    Eigen::VectorXd rj;
    if (!residual(to.x, pb, j, rj)) return false;
    to.g = rj[j - 1];
    return tangent(to.x, &from.t, to.t);
  };

  Point a{x, {}, 0.0};
  {
    Eigen::VectorXd rj;
    if (!residual(a.x, pb, j, rj) || !tangent(a.x, nullptr, a.t)) return false;
    a.g = rj[j - 1];
  }
  Point b;
  double h = 0.5, sb = 0.0;
  bool bracketed = a.g == 0.0;
  if (!bracketed && (a.g > 0) != (r0 > 0)) return false;  // overshot already by the perturbation
  for (int k = 0; k < 300 && !bracketed; ++k) {
    Point t;
    if (!correct(a, h, t)) {
      h *= 0.25;
      if (h < 1e-9) return false;
      continue;
    }
    if ((t.g > 0) != (a.g > 0) || t.g == 0.0) {
      b = std::move(t);
      sb = h;
      bracketed = true;
      break;
    }
    if (std::abs(t.g) > 2.0 * std::abs(r0) + 1e-9) return false;
    a = std::move(t);
    h = std::min(2.0 * h, 4.0);
  }
  if (!bracketed) return false;
  if (a.g != 0.0) {
    // Illinois false position in the step length from a
    double sa = 0.0, ga = a.g, gb = b.g;
    Point best = std::abs(a.g) < std::abs(b.g) ? a : b;
    int side = 0;
    for (int k = 0; k < 100 && std::abs(best.g) > 1e-14 && sb - sa > 1e-15; ++k) {
      double sm = (sa * gb - sb * ga) / (gb - ga);
      if (!(sm > sa && sm < sb)) sm = 0.5 * (sa + sb);
      Point m;
      if (!correct(a, sm, m)) {
        sm = 0.5 * (sa + sb);
        if (!correct(a, sm, m)) return false;
      }
      if (std::abs(m.g) < std::abs(best.g)) best = m;
      if ((m.g > 0) == (ga > 0)) {
        sa = sm;
        ga = m.g;
        if (side == 1) gb *= 0.5;
        side = 1;
      } else {
        sb = sm;
        gb = m.g;
        if (side == -1) ga *= 0.5;
        side = -1;
      }
    }
    x = std::move(best.x);
  } else {
    x = std::move(a.x);
  }
  const LmOptions fin{j, {}, cfg.rel_tol, cfg.max_iter, true, cfg.damping_floor};
  const LmResult lr = lm_solve(x, pb, fin, &out.trace);
  out.iters += lr.iters;
  out.resid = lr.resid;
  return lr.converged;
}

StageOut solve_stage(Sign s, int j, const Problem& pb, const SimpleLogConcaveFn& start, const SolverConfig& cfg) {
  StageOut out;
  SimpleLogConcaveFn e = SimpleLogConcaveFn::point_mass();
  try {
    e = embed(start, {j, s});
  } catch (const NotEmbeddable&) {
    return out;
  }
  const InternalCoords x0 = internal_coords(e);
  Eigen::VectorXd r0;
  if (!residual(x0, pb, j, r0)) return out;
  const double D = std::abs(r0[j - 1]);
  for (std::size_t c = 0; c < x0.pins.size(); ++c) {
    if (x0.pins[c] == Pin::Free) continue;
    InternalCoords x = x0;
    if (march(x, c, pb, j, r0[j - 1], cfg, out)) {
      out.ok = true;
      out.x = std::move(x);
      return out;
    }
  }
  for (double shrink : {1.0, 0.1, 0.01}) {
    const double delta = std::clamp(0.1 * D, 1e-9, 1e-2) * shrink;
    for (std::size_t c = 0; c < x0.pins.size(); ++c) {
      if (x0.pins[c] == Pin::Free) continue;
      InternalCoords x = x0;
      const bool okp = perturb(x, c, pb, j, delta);
      if (!okp) continue;
      std::vector<char> frozen(x.theta.size(), 0);
      frozen[c] = 1;
      const LmResult lc = lm_solve(x, pb, {j - 1, frozen, 1e-12, cfg.max_iter, false, cfg.damping_floor}, &out.trace);
      out.iters += lc.iters;
      if (!lc.converged) continue;
      // with the first j-1 moments restored, m_j has to have moved toward its target
      Eigen::VectorXd rc;
      if (!residual(x, pb, j, rc)) continue;
      if ((rc[j - 1] - r0[j - 1]) * r0[j - 1] >= 0.0) continue;
      if (homotopy(x, pb, j, cfg, out)) {
        out.ok = true;
        out.x = std::move(x);
        return out;
      }
    }
  }
  return out;
}

double max_rel_error(const SimpleLogConcaveFn& f, const ExponentTuple& p, const MomentVector& T) {
  double worst = 0.0;
  const Profile pr = f.profile();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = moment(pr, p[i]), t = T[i];
    if (m == t) continue;
    worst = std::max(worst, std::abs(m / t - 1.0));
  }
  return worst;
}

SolveReport make_report(const SimpleLogConcaveFn& f, const ExponentTuple& p, const MomentVector& T,
                        SolveStatus st, std::vector<double> trace, std::string msg) {
  SolveReport r;
  r.solution = f;
  r.residual = max_rel_error(f, p, T);
  r.status = st;
  r.trace = std::move(trace);
  r.iterations = static_cast<int>(r.trace.size());
  r.message = std::move(msg);
  return r;
}

}  // namespace

// ---------------------------------------------------------------- continuation chain

ChainResult solve_chain(const ExponentTuple& p, const MomentVector& T, const SolverConfig& cfg,
                        bool want_plus, bool want_minus) {
  cfg.validate();
  const std::size_t n = p.size();
  if (n == 0) throw DomainError("need at least one constraint");
  if (T.size() != n) throw DomainError("exponent and target counts differ");
  if (n > kMaxConstraints)
    throw DomainError("at most " + std::to_string(kMaxConstraints) + " constraints are supported");

  ChainResult res;
  std::vector<double> trail;  // residuals of every LM iteration, all stages
  auto on_boundary = [&](const SimpleLogConcaveFn& B, const std::string& msg) {
    res.status = Feasibility::Boundary;
    res.boundary_fn = canonical(B);
    const int ord = static_cast<int>(n);
    if (want_plus)
      res.plus = make_report(embed(B, {ord, Sign::Plus}), p, T, SolveStatus::ConvergedOnBoundary, trail, msg);
    if (want_minus)
      res.minus = make_report(embed(B, {ord, Sign::Minus}), p, T, SolveStatus::ConvergedOnBoundary, trail, msg);
    return res;
  };
  auto infeasible = [&](const std::string& msg) {
    res.status = Feasibility::Infeasible;
    res.message = msg;
    return res;
  };

  if (T.all_zero()) return on_boundary(SimpleLogConcaveFn::point_mass(), "all moments zero: f = 1_{0}");
  if (T.all_inf()) return on_boundary(SimpleLogConcaveFn::constant_one(), "all moments INF: f = 1");
  for (std::size_t i = 0; i < n; ++i)
    if (T[i].is_zero()) return infeasible("a zero moment forces f = 0 a.e., so every moment must vanish");

  Problem pb;
  pb.p = p.values();
  for (std::size_t i = 0; i < n; ++i) pb.logT.push_back(std::log(T[i].value()));
  const double s1 = p[0] + 1.0;
  pb.logL = pb.logT[0] / s1;

  SimpleLogConcaveFn fp = SimpleLogConcaveFn::exponential(std::exp((ln_gamma(s1) - pb.logT[0]) / s1));
  SimpleLogConcaveFn fm = SimpleLogConcaveFn::indicator(std::exp((std::log(s1) + pb.logT[0]) / s1));
  StageOut last_plus, last_minus;
  std::optional<SimpleLogConcaveFn> B;
  std::size_t b_stage = 0;
  const double tol = cfg.boundary_tol;

  for (std::size_t j = 2; j <= n; ++j) {
    const double ltj = pb.logT[j - 1];
    if (B) {
      const double m = moment(*B, p[j - 1]);
      if (!(std::abs(std::log(m) - ltj) <= tol))
        return infeasible("constraints 1.." + std::to_string(b_stage) + " lie on the boundary; constraint " +
                          std::to_string(j) + " is not attained by the boundary function");
      continue;
    }
    const double lp = std::log(moment(fp, p[j - 1])), lm = std::log(moment(fm, p[j - 1]));
    const double lo = std::min(lp, lm), hi = std::max(lp, lm);
    // endpoint snapping is relative to the width of the section: thin sections are still interior
    const double snap = tol * std::min(1.0, hi - lo);
    if (ltj < lo - snap || ltj > hi + snap)
      return infeasible("constraint " + std::to_string(j) + " outside the envelope [" +
                        std::to_string(std::exp(lo)) + ", " + std::to_string(std::exp(hi)) + "]");
    if (std::abs(ltj - lp) <= snap || std::abs(ltj - lm) <= snap) {
      B = std::abs(ltj - lp) <= std::abs(ltj - lm) ? fp : fm;
      b_stage = j - 1;
      continue;
    }
    const bool last = j == n;
    const SimpleLogConcaveFn& near = std::abs(ltj - lp) < std::abs(ltj - lm) ? fp : fm;
    const SimpleLogConcaveFn& far = &near == &fp ? fm : fp;
    std::optional<SimpleLogConcaveFn> np, nm;
    for (Sign s : {Sign::Plus, Sign::Minus}) {
      if (last && !(s == Sign::Plus ? want_plus : want_minus)) continue;
      StageOut so = solve_stage(s, static_cast<int>(j), pb, near, cfg);
      if (!so.ok) {
        trail.insert(trail.end(), so.trace.begin(), so.trace.end());
        so = solve_stage(s, static_cast<int>(j), pb, far, cfg);
      }
      trail.insert(trail.end(), so.trace.begin(), so.trace.end());
      if (!so.ok) {
        res.status = Feasibility::Interior;
        res.converged = false;
        res.message = std::string("continuation failed at constraint ") + std::to_string(j) + " for L_" +
                      std::to_string(j) + (s == Sign::Plus ? "^+" : "^-");
        SolveReport bad;
        bad.status = SolveStatus::NoConvergence;
        bad.trace = trail;
        bad.iterations = static_cast<int>(trail.size());
        bad.message = res.message;
        if (want_plus) res.plus = bad;
        if (want_minus) res.minus = bad;
        return res;
      }
      (s == Sign::Plus ? np : nm) = from_internal(so.x);
      (s == Sign::Plus ? last_plus : last_minus) = std::move(so);
    }
    if (np) fp = *np;
    if (nm) fm = *nm;
  }
  if (B) return on_boundary(*B, "target lies on the boundary of the moment body (constraint " +
                                    std::to_string(b_stage + 1) + ")");

  res.status = Feasibility::Interior;
  auto finish = [&](Sign s, const SimpleLogConcaveFn& f, const StageOut& so) {
    const int ord = static_cast<int>(n);
    const SimpleLogConcaveFn g = f.cls().order == ord ? f : embed(f, {ord, s});
    bool pinned = false;
    for (Pin pn : so.x.pins) pinned = pinned || pn != Pin::Free;
    if (n == 1) pinned = false;
    SolveReport r = make_report(g, p, T, SolveStatus::Converged, trail, "");
    if (pinned)
      r.status = SolveStatus::ConvergedOnBoundary;
    else if (!(r.residual <= cfg.rel_tol)) {
      r.status = SolveStatus::NoConvergence;
      r.message = "residual above rel_tol";
      res.converged = false;
    }
    return r;
  };
  if (want_plus) res.plus = finish(Sign::Plus, fp, last_plus);
  if (want_minus) res.minus = finish(Sign::Minus, fm, last_minus);
  return res;
}

SolveReport match_moments(Sign sign, const ExponentTuple& p, const MomentVector& targets, const SolverConfig& cfg) {
  const ChainResult cr = solve_chain(p, targets, cfg, sign == Sign::Plus, sign == Sign::Minus);
  if (cr.status == Feasibility::Infeasible) {
    SolveReport r;
    r.status = SolveStatus::Infeasible;
    r.message = cr.message;
    return r;
  }
  return sign == Sign::Plus ? *cr.plus : *cr.minus;
}

Feasibility feasibility(const ExponentTuple& p, const MomentVector& targets, const SolverConfig& cfg) {
  const ChainResult cr = solve_chain(p, targets, cfg, false, false);
  if (!cr.converged) throw NonConvergence("feasibility: " + cr.message);
  return cr.status;
}

}  // namespace lcm
