#include "ctx/kscolor.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

#include "ctx/error.hpp"

namespace ctx {

int OrthogonalityStructure::index(const std::string& label) const {
  auto it = std::find(vertices.begin(), vertices.end(), label);
  if (it == vertices.end()) throw DataError("structure has no vertex '" + label + "'");
  return static_cast<int>(it - vertices.begin());
}

OrthogonalityStructure make_structure(const std::vector<std::string>& vertices,
                                      const std::vector<std::pair<std::string, std::string>>& edges,
                                      const std::vector<std::vector<std::string>>& bases) {
  if (vertices.empty()) throw DataError("structure has no vertices");
  if (vertices.size() > 64) throw DataError("structure has more than 64 vertices");
  std::set<std::string> seen;
  for (const auto& v : vertices)
    if (v.empty() || !seen.insert(v).second) throw DataError("empty or duplicate vertex label '" + v + "'");
  OrthogonalityStructure s;
  s.vertices = vertices;
  std::set<std::pair<int, int>> es;
  for (const auto& [a, b] : edges) {
    int u = s.index(a), v = s.index(b);
    if (u == v) throw DataError("self-orthogonal vertex '" + a + "'");
    es.insert(std::minmax(u, v));
  }
  s.edges.assign(es.begin(), es.end());
  for (const auto& b : bases) {
    if (b.empty()) throw DataError("empty basis");
    std::vector<int> idx;
    for (const auto& l : b) idx.push_back(s.index(l));
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) throw DataError("basis repeats a vertex");
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = i + 1; j < idx.size(); ++j)
        if (!es.count({idx[i], idx[j]}))
          throw DataError("basis is not a clique: " + s.vertices[idx[i]] + " and " + s.vertices[idx[j]] +
                          " are not orthogonal");
    s.bases.push_back(idx);
  }
  return s;
}

OrthogonalityStructure structure_from_dataset(const ProjectorDataset& d) {
  if (d.kind != EntryKind::Projector) throw DataError("dataset " + d.name + " does not hold projectors");
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::vector<std::string>> bases;
  for (const auto& r : d.relations) {
    if (r.type == RelationType::Orthogonal) edges.emplace_back(r.labels[0], r.labels[1]);
    if (r.type == RelationType::CompleteBasis) bases.push_back(r.labels);
  }
  return make_structure(d.labels, edges, bases);
}

bool satisfies_ks_rules(const OrthogonalityStructure& s, const KsColoring& c) {
  if (c.size() != s.vertices.size()) return false;
  for (auto v : c)
    if (v > 1) return false;
  for (auto [u, v] : s.edges)
    if (c[u] && c[v]) return false;
  for (const auto& b : s.bases) {
    int ones = 0;
    for (int v : b) ones += c[v];
    if (ones != 1) return false;
  }
  return true;
}

namespace {

using Mask = std::uint64_t;

struct Search {
  int n = 0;
  std::vector<int> order;
  std::vector<Mask> adj;
  std::vector<Mask> basis;
  std::vector<std::vector<int>> bases_of;
  std::size_t cap = 0;
  ColoringResult result;
  bool stop = false;

  bool consistent(int v, Mask assigned, Mask ones) const {
    if ((ones >> v) & 1u)
      if (adj[v] & ones) return false;
    for (int b : bases_of[v]) {
      const Mask bm = basis[b];
      const int k = std::popcount(ones & bm);
      if (k > 1) return false;
      if ((assigned & bm) == bm && k == 0) return false;
    }
    return true;
  }

  void run(int depth, Mask assigned, Mask ones) {
    if (stop) return;
    if (depth == n) {
      if (result.colorings.size() >= cap) {
        result.exact = false;
        stop = true;
        return;
      }
      KsColoring c(n);
      for (int v = 0; v < n; ++v) c[v] = (ones >> v) & 1u;
      result.colorings.push_back(std::move(c));
      return;
    }
    const int v = order[depth];
    const Mask bit = Mask{1} << v;
    for (int value : {0, 1}) {
      Mask o = value ? ones | bit : ones;
      if (consistent(v, assigned | bit, o)) run(depth + 1, assigned | bit, o);
    }
  }
};

}  // namespace

ColoringResult enumerate_colorings(const OrthogonalityStructure& s, std::size_t cap) {
  const int n = static_cast<int>(s.vertices.size());
  if (n > 64) throw DataError("coloring search supports at most 64 vertices");
  Search st;
  st.n = n;
  st.cap = cap;
  st.adj.assign(n, 0);
  st.bases_of.assign(n, {});
  for (auto [u, v] : s.edges) {
    st.adj[u] |= Mask{1} << v;
    st.adj[v] |= Mask{1} << u;
  }
  for (std::size_t b = 0; b < s.bases.size(); ++b) {
    Mask m = 0;
    for (int v : s.bases[b]) {
      m |= Mask{1} << v;
      st.bases_of[v].push_back(static_cast<int>(b));
    }
    st.basis.push_back(m);
  }
  st.order.resize(n);
  std::iota(st.order.begin(), st.order.end(), 0);
  std::stable_sort(st.order.begin(), st.order.end(),
                   [&](int a, int b) { return st.bases_of[a].size() > st.bases_of[b].size(); });
  st.run(0, 0, 0);
  return st.result;
}

std::optional<ParityCertificate> parity_certificate(const OrthogonalityStructure& s) {
  const int nb = static_cast<int>(s.bases.size());
  if (nb % 2 == 0) return std::nullopt;
  std::vector<int> mult(s.vertices.size(), 0);
  for (const auto& b : s.bases)
    for (int v : b) ++mult[v];
  for (int m : mult)
    if (m % 2) return std::nullopt;
  ParityCertificate c;
  c.bases = nb;
  c.multiplicity = mult;
  c.statement = "summing rule 2 over the " + std::to_string(nb) +
                " bases gives an odd total, while every vertex is counted an even number of times";
  return c;
}

PropagationTrace propagate(const OrthogonalityStructure& s, const std::map<std::string, int>& fixed) {
  PropagationTrace t;
  t.values.assign(s.vertices.size(), -1);
  for (const auto& [label, v] : fixed) {
    if (v != 0 && v != 1) throw DataError("propagation values must be 0 or 1");
    t.values[s.index(label)] = v;
    t.steps.push_back(label + " = " + std::to_string(v) + " (given)");
  }
  auto basis_name = [&](const std::vector<int>& b) {
    std::string out = "{";
    for (std::size_t i = 0; i < b.size(); ++i) out += (i ? "," : "") + s.vertices[b[i]];
    return out + "}";
  };
  auto fail = [&](std::string why) {
    t.conflict = true;
    t.conflict_reason = std::move(why);
    t.steps.push_back("conflict: " + t.conflict_reason);
    return t;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (auto [u, v] : s.edges) {
      for (auto [a, b] : {std::pair{u, v}, std::pair{v, u}}) {
        if (t.values[a] != 1) continue;
        if (t.values[b] == 1)
          return fail("orthogonal " + s.vertices[a] + " and " + s.vertices[b] + " are both 1 (rule 1)");
        if (t.values[b] == -1) {
          t.values[b] = 0;
          t.steps.push_back(s.vertices[b] + " = 0 (orthogonal to " + s.vertices[a] + ")");
          changed = true;
        }
      }
    }
    for (const auto& b : s.bases) {
      int ones = 0, open = 0, last = -1;
      for (int v : b) {
        if (t.values[v] == 1) ++ones;
        if (t.values[v] == -1) {
          ++open;
          last = v;
        }
      }
      if (ones > 1) return fail("basis " + basis_name(b) + " has two vertices set to 1 (rule 1)");
      if (ones == 0 && open == 0) return fail("basis " + basis_name(b) + " has no vertex set to 1 (rule 2)");
      if (ones == 0 && open == 1) {
        t.values[last] = 1;
        t.steps.push_back(s.vertices[last] + " = 1 (only open vertex of basis " + basis_name(b) + ")");
        changed = true;
      }
    }
  }
  return t;
}

YuOhReport yu_oh_check() {
  auto ds = yuoh13();
  YuOhReport r;
  auto dr = verify_projector_dataset(ds);
  r.quantum_verified = dr.pass;
  CMatrix hsum = CMatrix::Zero(3, 3);
  for (const char* h : {"h0", "h1", "h2", "h3"}) hsum += ds.op(h);
  r.quantum_h_sum = hsum.trace().real() / 3;
  auto s = structure_from_dataset(ds);
  auto res = enumerate_colorings(s);
  r.colorings = res.colorings.size();
  r.colorings_exact = res.exact;
  const std::vector<int> hs{s.index("h0"), s.index("h1"), s.index("h2"), s.index("h3")};
  for (const auto& c : res.colorings) {
    int sum = 0;
    for (int h : hs) sum += c[h];
    r.max_h_sum = std::max(r.max_h_sum, sum);
  }
  r.all_within_one = r.max_h_sum <= 1;
  r.contradiction = r.quantum_verified && r.colorings > 0 && r.max_h_sum < r.quantum_h_sum;
  r.h0_h1_trace = propagate(s, {{"h0", 1}, {"h1", 1}});
  return r;
}

namespace {

int count_product_assignments(const std::vector<std::vector<int>>& lines, const std::vector<int>& signs) {
  int count = 0;
  for (unsigned a = 0; a < 512; ++a) {
    bool ok = true;
    for (std::size_t k = 0; k < lines.size() && ok; ++k) {
      int p = 1;
      for (int v : lines[k]) p *= (a >> v) & 1u ? -1 : 1;
      ok = p == signs[k];
    }
    count += ok;
  }
  return count;
}

}  // namespace

PeresMerminReport peres_mermin_check() {
  auto ds = peres_mermin9();
  PeresMerminReport r;
  r.quantum_verified = verify_projector_dataset(ds).pass;
  std::vector<std::vector<int>> lines;
  std::vector<int> signs;
  for (const auto& rel : ds.relations) {
    if (rel.type != RelationType::ProductEquals) continue;
    std::vector<int> line;
    for (const auto& l : rel.labels)
      line.push_back(static_cast<int>(std::find(ds.labels.begin(), ds.labels.end(), l) - ds.labels.begin()));
    lines.push_back(line);
    signs.push_back(rel.scalar > 0 ? 1 : -1);
  }
  if (lines.size() != 6 || ds.labels.size() != 9) throw SolverError("Peres–Mermin square is malformed");
  r.assignments = 512;
  r.satisfying = count_product_assignments(lines, signs);
  auto relaxed = signs;
  relaxed.back() = 1;
  r.relaxed_satisfying = count_product_assignments(lines, relaxed);
  r.nc_maximum = nc_maximum(peres_mermin_case().inequality).value;
  return r;
}

NcMaximum nc_maximum(const BooleInequality& ineq) {
  const auto& s = ineq.scenario;
  const int k = s.num_observables();
  if (k > 24) throw DataError("brute-force maximum supports at most 24 observables");
  std::vector<std::uint32_t> masks;
  std::vector<Rational> coeffs;
  bool integral = true;
  for (int c = 0; c < s.num_contexts(); ++c) {
    if (sgn(ineq.h.a[c]) == 0) continue;
    std::uint32_t m = 0;
    for (int i : s.contexts()[c]) m |= 1u << (k - 1 - i);
    masks.push_back(m);
    coeffs.push_back(ineq.h.a[c]);
    if (ineq.h.a[c].get_den() != 1) integral = false;
  }
  NcMaximum best;
  best.assignments = std::uint64_t{1} << k;
  const std::uint32_t total = 1u << k;
  if (integral) {
    std::vector<long> ic;
    for (const auto& c : coeffs) {
      if (!c.get_num().fits_slong_p()) throw DataError("coefficient too large for the brute-force maximum");
      ic.push_back(c.get_num().get_si());
    }
    long bestv = 0;
    for (std::uint32_t a = 0; a < total; ++a) {
      long v = 0;
      for (std::size_t t = 0; t < masks.size(); ++t) v += std::popcount(a & masks[t]) & 1 ? -ic[t] : ic[t];
      if (a == 0 || v > bestv) {
        bestv = v;
        best.argmax = a;
      }
    }
    best.value = Rational(bestv);
    return best;
  }
  for (std::uint32_t a = 0; a < total; ++a) {
    Rational v = 0;
    for (std::size_t t = 0; t < masks.size(); ++t) v += std::popcount(a & masks[t]) & 1 ? -coeffs[t] : coeffs[t];
    if (a == 0 || v > best.value) {
      best.value = v;
      best.argmax = a;
    }
  }
  return best;
}

}  // namespace ctx
