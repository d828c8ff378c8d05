#include "ctx/polytope.hpp"

#include <algorithm>
#include <boost/dynamic_bitset.hpp>
#include <map>
#include <set>

#include "ctx/error.hpp"

namespace ctx {

bool Halfspace::operator<(const Halfspace& o) const {
  if (a != o.a) return a < o.a;
  return b < o.b;
}

Halfspace normalize(const Halfspace& h) {
  Integer l = lcm_of_denominators(h.a);
  std::vector<Integer> ints;
  for (const auto& x : h.a) ints.push_back(Integer(x * l));
  Integer g = gcd_of(ints);
  if (g == 0) throw DataError("inequality has all coefficients zero");
  Rational f(l, g);
  f.canonicalize();
  Halfspace out;
  for (const auto& x : h.a) out.a.push_back(x * f);
  out.b = h.b * f;
  return out;
}

Rational BooleInequality::evaluate(const RVector& e) const {
  Rational v;
  for (std::size_t i = 0; i < h.a.size(); ++i)
    if (sgn(h.a[i]) != 0) v += h.a[i] * e[i];
  return v;
}

BooleInequality make_inequality(const MarginalScenario& s, const Halfspace& h) {
  if (static_cast<int>(h.a.size()) != s.num_contexts())
    throw DataError("inequality length does not match the scenario");
  return {s, normalize(h)};
}

std::string to_string(FacetClass c) { return c == FacetClass::Positivity ? "positivity" : "boole"; }

int assignment_value(const MarginalScenario& s, GlobalAssignment a, int obs) {
  const int k = s.num_observables();
  return (a >> (k - 1 - obs)) & 1u ? -1 : 1;
}

namespace {

std::vector<signed char> assignment_signs(const MarginalScenario& s, GlobalAssignment a) {
  std::vector<signed char> out;
  out.reserve(s.num_contexts());
  for (const auto& c : s.contexts()) {
    int v = 1;
    for (int i : c) v *= assignment_value(s, a, i);
    out.push_back(static_cast<signed char>(v));
  }
  return out;
}

struct VertexTable {
  std::vector<std::vector<signed char>> points;
  std::vector<GlobalAssignment> reps;
};

VertexTable nc_vertex_table(const MarginalScenario& s) {
  const int k = s.num_observables();
  if (k > kMaxObservables) throw DataError("scenario exceeds the observable cap");
  VertexTable t;
  std::map<std::vector<signed char>, std::size_t> seen;
  for (GlobalAssignment a = 0; a < (GlobalAssignment{1} << k); ++a) {
    auto p = assignment_signs(s, a);
    if (seen.emplace(p, t.points.size()).second) {
      t.points.push_back(std::move(p));
      t.reps.push_back(a);
    }
  }
  return t;
}

std::vector<Integer> primitive(std::vector<Integer> v) {
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, x);
  if (g > 1)
    for (auto& x : v) x /= g;
  return v;
}

std::vector<Integer> integer_row(const RVector& r) {
  Integer l = lcm_of_denominators(r);
  std::vector<Integer> out;
  for (const auto& x : r) out.push_back(Integer(x * l));
  return primitive(out);
}

Integer dot(const std::vector<Integer>& a, const std::vector<Integer>& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

}  // namespace

RVector assignment_point(const MarginalScenario& s, GlobalAssignment a) {
  RVector out;
  for (auto v : assignment_signs(s, a)) out.emplace_back(static_cast<int>(v));
  return out;
}

PolytopeV nc_vertices(const MarginalScenario& s) {
  auto t = nc_vertex_table(s);
  PolytopeV p;
  p.dimension = s.num_contexts();
  for (const auto& pt : t.points) {
    RVector v;
    for (auto x : pt) v.emplace_back(static_cast<int>(x));
    p.vertices.push_back(std::move(v));
  }
  return p;
}

std::vector<Halfspace> positivity_inequalities(const MarginalScenario& s, bool maximal_only) {
  std::vector<Halfspace> out;
  for (int ci = 0; ci < s.num_contexts(); ++ci) {
    if (maximal_only && !s.is_maximal(ci)) continue;
    const Context& c = s.contexts()[ci];
    const int m = static_cast<int>(c.size());
    for (std::uint32_t o = 0; o < (1u << m); ++o) {
      Halfspace h{RVector(s.num_contexts()), Rational(1)};
      for (std::uint32_t k = 1; k < (1u << m); ++k) {
        Context sub;
        for (int b = 0; b < m; ++b)
          if (k & (1u << (m - 1 - b))) sub.push_back(c[b]);
        int sign = __builtin_popcount(k & o) % 2 ? -1 : 1;
        h.a[s.context_index(sub)] = -sign;
      }
      out.push_back(normalize(h));
    }
  }
  return out;
}

int tight_affine_rank(const PolytopeV& p, const Halfspace& h) {
  std::vector<RVector> rows;
  for (const auto& v : p.vertices) {
    Rational s;
    for (std::size_t i = 0; i < v.size(); ++i) s += h.a[i] * v[i];
    if (s == h.b) {
      RVector r = v;
      r.emplace_back(1);
      rows.push_back(std::move(r));
    }
  }
  return exact_rank(rows) - 1;
}

ContextualityVerdict decide_contextuality(const ExactExpectations& e) {
  const auto& s = e.scenario;
  const int k = s.num_observables();
  if (k > kMaxObservables) throw DataError("more than 2^20 LP variables");
  const int d = s.num_contexts();
  auto vt = nc_vertex_table(s);
  const std::size_t nv = vt.points.size();

  std::vector<LinearRow> rows;
  rows.push_back({RVector(nv, Rational(1)), Sense::Equal, Rational(1)});
  for (int i = 0; i < d; ++i) {
    LinearRow r{RVector(nv), Sense::Equal, e.entries[i]};
    for (std::size_t v = 0; v < nv; ++v) r.a[v] = static_cast<int>(vt.points[v][i]);
    rows.push_back(std::move(r));
  }
  ContextualityVerdict verdict;
  auto feas = lp_feasibility(rows, nv);
  if (feas.feasible) {
    RVector check(d);
    for (std::size_t v = 0; v < nv; ++v) {
      if (sgn(feas.x[v]) == 0) continue;
      verdict.witness.push_back({vt.reps[v], feas.x[v]});
      for (int i = 0; i < d; ++i) check[i] += feas.x[v] * static_cast<int>(vt.points[v][i]);
    }
    if (check != e.entries) throw SolverError("witness mixture does not reproduce the model");
    return verdict;
  }

  // Shoot a ray from the barycenter (the origin) towards E; the dual of the
  // exit-point LP is a supporting hyperplane at the point where the ray leaves.
  for (auto& r : rows) r.a.emplace_back(0);
  for (int i = 0; i < d; ++i) {
    rows[i + 1].a[nv] = -e.entries[i];
    rows[i + 1].b = 0;
  }
  RVector cost(nv + 1);
  cost[nv] = 1;
  auto res = lp_maximize(rows, cost);
  if (res.status != LpStatus::Optimal) throw SolverError("exit-point LP did not reach an optimum");
  Halfspace h{RVector(d), res.y[0]};
  for (int i = 0; i < d; ++i) h.a[i] = -res.y[i + 1];
  h = normalize(h);

  PolytopeV poly = nc_vertices(s);
  verdict.contextual = true;
  verdict.certificate_is_facet = tight_affine_rank(poly, h) == d - 1;
  if (!verdict.certificate_is_facet && d <= 12) {
    RVector exit_point;
    for (const auto& x : e.entries) exit_point.push_back(x * res.value);
    for (const auto& f : facet_enumeration(poly)) {
      Rational at;
      for (int i = 0; i < d; ++i) at += f.a[i] * exit_point[i];
      if (at == f.b) {
        h = f;
        verdict.certificate_is_facet = true;
        break;
      }
    }
  }
  verdict.certificate = BooleInequality{s, h};
  verdict.violation = verdict.certificate->evaluate(e.entries) - h.b;
  if (sgn(verdict.violation) <= 0) throw SolverError("certificate is not violated by the model");
  for (const auto& v : poly.vertices)
    if (verdict.certificate->evaluate(v) > h.b) throw SolverError("certificate cuts off a noncontextual vertex");
  return verdict;
}

ContextualityVerdict decide_contextuality(const ExactModel& m) {
  return decide_contextuality(probs_to_expectations(m));
}

ContextualityVerdict decide_contextuality(const FloatModel& m) {
  return decide_contextuality(rationalize(probs_to_expectations(m)));
}

std::vector<std::vector<Integer>> cone_extreme_rays(const std::vector<std::vector<Integer>>& rows) {
  using Bits = boost::dynamic_bitset<>;
  if (rows.empty()) throw DataError("cone has no constraints");
  const std::size_t D = rows[0].size();
  const std::size_t M = rows.size();

  // Greedily pick D independent rows.
  std::vector<std::size_t> chosen;
  std::vector<RVector> echelon;
  std::vector<std::size_t> pivots;
  for (std::size_t r = 0; r < M && chosen.size() < D; ++r) {
    RVector v(rows[r].begin(), rows[r].end());
    for (std::size_t e = 0; e < echelon.size(); ++e) {
      std::size_t pc = pivots[e];
      if (sgn(v[pc]) == 0) continue;
      Rational f = v[pc] / echelon[e][pc];
      for (std::size_t c = 0; c < D; ++c) v[c] -= f * echelon[e][c];
    }
    std::size_t pc = 0;
    while (pc < D && sgn(v[pc]) == 0) ++pc;
    if (pc == D) continue;
    echelon.push_back(v);
    pivots.push_back(pc);
    chosen.push_back(r);
  }
  if (chosen.size() < D) throw DataError("cone is not pointed (constraint rank below dimension)");

  // Inverse of the chosen block: its columns are the initial rays.
  std::vector<RVector> aug(D, RVector(2 * D));
  for (std::size_t i = 0; i < D; ++i) {
    for (std::size_t j = 0; j < D; ++j) aug[i][j] = rows[chosen[i]][j];
    aug[i][D + i] = 1;
  }
  for (std::size_t c = 0; c < D; ++c) {
    std::size_t p = c;
    while (sgn(aug[p][c]) == 0) ++p;
    std::swap(aug[p], aug[c]);
    Rational piv = aug[c][c];
    for (auto& x : aug[c]) x /= piv;
    for (std::size_t r = 0; r < D; ++r) {
      if (r == c || sgn(aug[r][c]) == 0) continue;
      Rational f = aug[r][c];
      for (std::size_t k = 0; k < 2 * D; ++k) aug[r][k] -= f * aug[c][k];
    }
  }

  struct Ray {
    std::vector<Integer> v;
    Bits z;
  };
  std::vector<Ray> rays;
  std::vector<bool> processed(M, false);
  for (auto r : chosen) processed[r] = true;
  for (std::size_t i = 0; i < D; ++i) {
    RVector col(D);
    for (std::size_t j = 0; j < D; ++j) col[j] = aug[j][D + i];
    Ray ray{integer_row(col), Bits(M)};
    for (std::size_t j = 0; j < D; ++j)
      if (j != i) ray.z.set(chosen[j]);
    rays.push_back(std::move(ray));
  }

  for (std::size_t r = 0; r < M; ++r) {
    if (processed[r]) continue;
    processed[r] = true;
    std::vector<Integer> val(rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      val[i] = dot(rows[r], rays[i].v);
      if (sgn(val[i]) > 0)
        pos.push_back(i);
      else if (sgn(val[i]) < 0)
        neg.push_back(i);
      else
        rays[i].z.set(r);
    }
    if (neg.empty()) continue;
    std::vector<Ray> next;
    for (std::size_t i = 0; i < rays.size(); ++i)
      if (sgn(val[i]) >= 0) next.push_back(rays[i]);
    for (auto p : pos)
      for (auto n : neg) {
        Bits common = rays[p].z & rays[n].z;
        if (common.count() + 2 < D) continue;
        bool adjacent = true;
        for (std::size_t o = 0; o < rays.size() && adjacent; ++o) {
          if (o == p || o == n) continue;
          if (common.is_subset_of(rays[o].z)) adjacent = false;
        }
        if (!adjacent) continue;
        std::vector<Integer> v(D);
        for (std::size_t c = 0; c < D; ++c) v[c] = val[p] * rays[n].v[c] - val[n] * rays[p].v[c];
        common.set(r);
        next.push_back({primitive(std::move(v)), std::move(common)});
      }
    rays = std::move(next);
  }
  std::vector<std::vector<Integer>> out;
  for (auto& r : rays) out.push_back(std::move(r.v));
  return out;
}

std::vector<Halfspace> facet_enumeration(const PolytopeV& p) {
  const int d = p.dimension;
  if (d > 12) throw DataError("facet enumeration: dimension exceeds cap of 12");
  if (p.vertices.size() > 10000) throw DataError("facet enumeration: more than 10^4 vertices");
  if (p.vertices.empty()) throw DataError("facet enumeration: no vertices");
  std::vector<std::vector<Integer>> rows;
  std::vector<RVector> lifted;
  for (const auto& v : p.vertices) {
    if (static_cast<int>(v.size()) != d) throw DataError("vertex has wrong dimension");
    RVector r{Rational(1)};
    for (const auto& x : v) r.push_back(-x);
    rows.push_back(integer_row(r));
    lifted.push_back(r);
  }
  if (exact_rank(lifted) != d + 1) throw DataError("facet enumeration: polytope is not full-dimensional");
  std::vector<Halfspace> out;
  for (const auto& ray : cone_extreme_rays(rows)) {
    Halfspace h{RVector(ray.begin() + 1, ray.end()), Rational(ray[0])};
    bool zero = std::all_of(h.a.begin(), h.a.end(), [](const Rational& x) { return sgn(x) == 0; });
    if (zero) continue;
    out.push_back(normalize(h));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ClassifiedFacet> classify_facets(const MarginalScenario& s, const std::vector<Halfspace>& facets) {
  auto pos = positivity_inequalities(s, false);
  std::set<Halfspace> pset(pos.begin(), pos.end());
  std::vector<ClassifiedFacet> out;
  for (const auto& f : facets) {
    auto n = normalize(f);
    out.push_back({n, pset.count(n) ? FacetClass::Positivity : FacetClass::Boole});
  }
  return out;
}

PolytopeV vertex_enumeration(const std::vector<Halfspace>& hs, int d) {
  if (d > 12) throw DataError("vertex enumeration: dimension exceeds cap of 12");
  std::vector<std::vector<Integer>> rows;
  std::vector<RVector> lifted;
  for (const auto& h : hs) {
    if (static_cast<int>(h.a.size()) != d) throw DataError("inequality has wrong dimension");
    RVector r{h.b};
    for (const auto& x : h.a) r.push_back(-x);
    rows.push_back(integer_row(r));
    lifted.push_back(r);
  }
  RVector t(d + 1);
  t[0] = 1;
  rows.push_back(integer_row(t));
  lifted.push_back(t);
  if (exact_rank(lifted) != d + 1) throw DataError("vertex enumeration: polyhedron is unbounded");
  PolytopeV p;
  p.dimension = d;
  for (const auto& ray : cone_extreme_rays(rows)) {
    if (sgn(ray[0]) == 0) throw DataError("vertex enumeration: polyhedron is unbounded");
    RVector v;
    for (int i = 1; i <= d; ++i) {
      Rational q(ray[i], ray[0]);
      q.canonicalize();
      v.push_back(q);
    }
    p.vertices.push_back(std::move(v));
  }
  std::sort(p.vertices.begin(), p.vertices.end());
  return p;
}

}  // namespace ctx
