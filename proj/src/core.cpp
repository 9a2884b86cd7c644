#include "lcm/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lcm/quadrature.hpp"

namespace lcm {

ExtReal::ExtReal(double v) : v_(v) {
  if (std::isnan(v) || v < 0.0) throw DomainError("ExtReal must be >= 0 or INF, got " + std::to_string(v));
}

// ---------------------------------------------------------------- exponents

ExponentTuple::ExponentTuple(std::vector<double> p) : p_(std::move(p)) {
  for (std::size_t i = 0; i < p_.size(); ++i) {
    if (!std::isfinite(p_[i]) || p_[i] <= -1.0)
      throw DomainError("exponent must be finite and > -1, got " + std::to_string(p_[i]));
    for (std::size_t j = 0; j < i; ++j)
      if (p_[j] == p_[i]) throw DomainError("exponents must be distinct");
  }
}

std::size_t ExponentTuple::rank(std::size_t i) const {
  std::size_t r = 1;
  for (double q : p_)
    if (q < p_.at(i)) ++r;
  return r;
}

ExponentTuple ExponentTuple::prefix(std::size_t n) const {
  if (n > p_.size()) throw DomainError("prefix longer than tuple");
  return ExponentTuple(std::vector<double>(p_.begin(), p_.begin() + static_cast<long>(n)));
}

double ExponentTuple::min() const { return *std::min_element(p_.begin(), p_.end()); }
double ExponentTuple::max() const { return *std::max_element(p_.begin(), p_.end()); }

// ---------------------------------------------------------------- templates

Layout layout(SimpleClass cls) {
  if (cls.order < 0) throw DomainError("negative class order");
  const int n = cls.order;
  if (n == 0) return {0, false, true};  // single degenerate cutoff in {0, INF}
  const int k = n / 2;
  if (n % 2 == 0) {
    if (cls.sign == Sign::Minus) return {k, true, true};
    return {k, false, false};
  }
  if (cls.sign == Sign::Plus) return {k + 1, true, false};
  return {k, false, true};
}

SimpleLogConcaveFn::SimpleLogConcaveFn(SimpleClass cls, std::vector<ExtReal> slopes,
                                       std::vector<ExtReal> knots)
    : cls_(cls), slopes_(std::move(slopes)), knots_(std::move(knots)) {
  const Layout L = layout(cls_);
  if (static_cast<int>(slopes_.size()) != L.n_slopes() ||
      static_cast<int>(knots_.size()) != L.n_knots())
    throw DomainError("slope/knot counts do not match the class template (order " +
                      std::to_string(cls_.order) + ")");
  if (cls_.order == 0 && !(knots_[0].is_zero() || knots_[0].is_inf()))
    throw DomainError("order-0 member must have cutoff 0 or INF");
  for (std::size_t i = 1; i < knots_.size(); ++i)
    if (knots_[i] < knots_[i - 1]) throw DomainError("knots must be nondecreasing");
}

SimpleLogConcaveFn SimpleLogConcaveFn::point_mass() { return {{0, Sign::Plus}, {}, {ExtReal(0.0)}}; }
SimpleLogConcaveFn SimpleLogConcaveFn::constant_one() { return {{0, Sign::Plus}, {}, {ExtReal::inf()}}; }
SimpleLogConcaveFn SimpleLogConcaveFn::exponential(double a) { return {{1, Sign::Plus}, {ExtReal(a)}, {}}; }
SimpleLogConcaveFn SimpleLogConcaveFn::indicator(double b) { return {{1, Sign::Minus}, {}, {ExtReal(b)}}; }

std::vector<ExtReal> SimpleLogConcaveFn::piece_knots() const {
  const Layout L = layout(cls_);
  std::vector<ExtReal> b;
  b.reserve(static_cast<std::size_t>(L.pieces));
  std::size_t j = 0;
  for (int i = 0; i < L.pieces; ++i) {
    if (i == 0 && L.first_knot_fixed)
      b.emplace_back(0.0);
    else
      b.push_back(knots_[j++]);
  }
  return b;
}

ExtReal SimpleLogConcaveFn::template_cutoff() const {
  return layout(cls_).has_cutoff ? knots_.back() : ExtReal::inf();
}

namespace {

Profile normalize(const std::vector<ExtReal>& knots, const std::vector<ExtReal>& incs, double cutoff) {
  double c = cutoff;
  for (std::size_t i = 0; i < knots.size(); ++i)
    if (incs[i].is_inf() && knots[i] < c) c = knots[i];
  Profile pr;
  pr.cutoff = c;
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const double a = incs[i], b = knots[i];
    if (a == 0.0 || std::isinf(a) || !(b < c)) continue;
    if (!pr.knots.empty() && pr.knots.back() == b)
      pr.incs.back() += a;
    else {
      pr.knots.push_back(b);
      pr.incs.push_back(a);
    }
  }
  return pr;
}

}  // namespace

Profile SimpleLogConcaveFn::profile() const {
  return normalize(piece_knots(), slopes_, template_cutoff());
}

PotentialSpec::PotentialSpec(std::vector<Piece> p, ExtReal c) : pieces(std::move(p)), cutoff(c) {
  double prev_s = 0.0, prev_k = 0.0;
  for (const auto& pc : pieces) {
    if (!std::isfinite(pc.slope) || !std::isfinite(pc.knot) || pc.knot < 0.0 || pc.slope < 0.0)
      throw DomainError("PotentialSpec pieces need finite nonnegative slope and knot");
    if (pc.slope < prev_s) throw DomainError("PotentialSpec slopes must be nondecreasing (convex V)");
    if (pc.knot < prev_k) throw DomainError("PotentialSpec knots must be nondecreasing");
    prev_s = pc.slope;
    prev_k = pc.knot;
  }
}

Profile PotentialSpec::profile() const {
  std::vector<ExtReal> knots, incs;
  double prev = 0.0;
  for (const auto& pc : pieces) {
    knots.emplace_back(pc.knot);
    incs.emplace_back(pc.slope - prev);
    prev = pc.slope;
  }
  return normalize(knots, incs, cutoff);
}

Profile profile_of(const AnyFn& f) {
  return std::visit([](const auto& g) { return g.profile(); }, f);
}

std::vector<Segment> segments(const Profile& pr) {
  std::vector<Segment> out;
  if (pr.cutoff == 0.0) return out;
  double lo = 0.0, V = 0.0, slope = 0.0;
  for (std::size_t i = 0; i < pr.knots.size(); ++i) {
    const double k = pr.knots[i];
    if (k > lo) {
      out.push_back({lo, k, -V, slope});
      V += slope * (k - lo);
      lo = k;
    }
    slope += pr.incs[i];
  }
  if (pr.cutoff > lo) out.push_back({lo, pr.cutoff, -V, slope});
  return out;
}

double eval(const Profile& pr, double t) {
  if (t < 0.0) throw DomainError("eval needs t >= 0");
  if (t > pr.cutoff) return 0.0;
  double V = 0.0;
  for (std::size_t i = 0; i < pr.knots.size() && pr.knots[i] < t; ++i) V += pr.incs[i] * (t - pr.knots[i]);
  return std::exp(-V);
}

double eval(const SimpleLogConcaveFn& f, double t) { return eval(f.profile(), t); }
double eval(const PotentialSpec& f, double t) { return eval(f.profile(), t); }

ExtReal support_bound(const SimpleLogConcaveFn& f) { return f.template_cutoff(); }

// ---------------------------------------------------------------- canonical form

SimpleLogConcaveFn canonical(const Profile& pr) {
  const std::size_t P = pr.knots.size();
  if (P == 0) {
    if (pr.cutoff == INF) return SimpleLogConcaveFn::constant_one();
    if (pr.cutoff == 0.0) return SimpleLogConcaveFn::point_mass();
    return SimpleLogConcaveFn::indicator(pr.cutoff);
  }
  const bool zero_first = pr.knots[0] == 0.0;
  const bool finite_cut = pr.cutoff < INF;
  SimpleClass cls{static_cast<int>(2 * P) + (finite_cut ? 1 : 0) - (zero_first ? 1 : 0),
                  finite_cut ? Sign::Minus : Sign::Plus};
  std::vector<ExtReal> slopes(pr.incs.begin(), pr.incs.end());
  std::vector<ExtReal> knots(pr.knots.begin() + (zero_first ? 1 : 0), pr.knots.end());
  if (finite_cut) knots.emplace_back(pr.cutoff);
  return {cls, std::move(slopes), std::move(knots)};
}

SimpleLogConcaveFn canonical(const SimpleLogConcaveFn& f) { return canonical(f.profile()); }

SimpleLogConcaveFn embed(const SimpleLogConcaveFn& f, SimpleClass target) {
  const Profile pr = f.profile();
  const SimpleLogConcaveFn cf = canonical(pr);
  if (target.order < cf.cls().order)
    throw NotEmbeddable("function of order " + std::to_string(cf.cls().order) +
                        " does not fit order " + std::to_string(target.order));
  if (target.order == 0) return {target, {}, cf.knots()};

  struct Piece {
    ExtReal knot, slope;
  };
  std::vector<Piece> pcs;
  for (std::size_t i = 0; i < pr.knots.size(); ++i) pcs.push_back({pr.knots[i], pr.incs[i]});
  const Layout L = layout(target);
  const ExtReal c(pr.cutoff);
  if (!L.has_cutoff && !c.is_inf()) pcs.push_back({c, ExtReal::inf()});
  if (L.first_knot_fixed && (pcs.empty() || pcs.front().knot > 0.0)) pcs.insert(pcs.begin(), {0.0, 0.0});
  if (static_cast<int>(pcs.size()) > L.pieces)
    throw NotEmbeddable("function needs " + std::to_string(pcs.size()) + " pieces, class order " +
                        std::to_string(target.order) + " offers " + std::to_string(L.pieces));
  while (static_cast<int>(pcs.size()) < L.pieces)
    pcs.push_back({L.has_cutoff ? c : ExtReal::inf(), ExtReal(0.0)});

  std::vector<ExtReal> slopes, knots;
  for (std::size_t i = 0; i < pcs.size(); ++i) {
    slopes.push_back(pcs[i].slope);
    if (!(i == 0 && L.first_knot_fixed)) knots.push_back(pcs[i].knot);
  }
  if (L.has_cutoff) knots.push_back(c);
  return {target, std::move(slopes), std::move(knots)};
}

// ---------------------------------------------------------------- distance

namespace {

struct Local {
  bool zero;
  double logv;   // log f at the reference point
  double slope;  // d(-log f)/dt
};

Local local_form(const Profile& pr, double t) {
  if (t > pr.cutoff) return {true, 0.0, 0.0};
  double V = 0.0, s = 0.0;
  for (std::size_t i = 0; i < pr.knots.size() && pr.knots[i] < t; ++i) {
    V += pr.incs[i] * (t - pr.knots[i]);
    s += pr.incs[i];
  }
  return {false, -V, s};
}

double eval_local(const Local& L, double m, double t) {
  return L.zero ? 0.0 : std::exp(L.logv - L.slope * (t - m));
}

}  // namespace

double distance(const AnyFn& f, const AnyFn& g, double p_lo, double p_hi) {
  if (!(p_lo > -1.0) || !(p_hi > -1.0)) throw DomainError("distance exponents must be > -1");
  const Profile pf = profile_of(f), pg = profile_of(g);
  if (pf.knots == pg.knots && pf.incs == pg.incs && pf.cutoff == pg.cutoff) return 0.0;
  if (pf.is_constant_one() || pg.is_constant_one())
    throw Diverges("d(f,g) diverges: the constant function 1 has no exponential decay");

  std::vector<double> br{0.0};
  for (double k : pf.knots) br.push_back(k);
  for (double k : pg.knots) br.push_back(k);
  if (pf.cutoff < INF) br.push_back(pf.cutoff);
  if (pg.cutoff < INF) br.push_back(pg.cutoff);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  if (pf.cutoff == INF || pg.cutoff == INF) br.push_back(INF);

  auto weight = [&](double t) { return std::pow(t, p_lo) + std::pow(t, p_hi); };
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < br.size(); ++k) {
    const double a = br[k], b = br[k + 1];
    const double m = std::isinf(b) ? a + 1.0 : 0.5 * (a + b);
    const Local lf = local_form(pf, m), lg = local_form(pg, m);
    if (lf.zero && lg.zero) continue;
    auto diff = [&](double t) { return std::abs(eval_local(lf, m, t) - eval_local(lg, m, t)); };
    auto size = [&](double t) { return eval_local(lf, m, t) + eval_local(lg, m, t); };

    std::vector<double> cuts{a};
    if (!lf.zero && !lg.zero && lf.slope != lg.slope) {
      const double tc = m + (lf.logv - lg.logv) / (lf.slope - lg.slope);
      if (tc > a && tc < b) cuts.push_back(tc);
    }
    if (a == 0.0 && p_lo < 0.0) {
      // singular weight at 0: isolate [0, t1] for the power substitution
      const double t1 = std::min(cuts.size() > 1 ? cuts[1] : b, 1.0);
      if (t1 < (cuts.size() > 1 ? cuts[1] : b)) cuts.insert(cuts.begin() + 1, t1);
    }
    cuts.push_back(b);

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double u = cuts[i], v = cuts[i + 1];
      if (u == 0.0 && p_lo < 0.0) {
        // t = s^{1/(1+p_lo)}: t^{p_lo} dt = ds/(1+p_lo)
        const double e = 1.0 / (1.0 + p_lo);
        auto w = [&](double s) {
          const double t = std::pow(s, e);
          return (1.0 + std::pow(t, p_hi - p_lo)) * e;
        };
        auto h = [&](double s) { return diff(std::pow(s, e)) * w(s); };
        auto sz = [&](double s) { return size(std::pow(s, e)) * w(s); };
        const double top = std::pow(v, 1.0 + p_lo);
        // |f - g| is rounding noise once f ~ g; the absolute floor follows the scale of f + g
        const double scale = quad::rough(sz, 0.0, top);
        total += quad::gk(h, 0.0, top, 1e-10, 1e-9 * scale, 60, false).value;
      } else {
        auto h = [&](double t) { return diff(t) * weight(t); };
        auto sz = [&](double t) { return size(t) * weight(t); };
        const double scale = quad::rough(sz, u, v);
        total += quad::gk(h, u, v, 1e-10, 1e-9 * scale, 60, false).value;
      }
    }
  }
  return total;
}

}  // namespace lcm
