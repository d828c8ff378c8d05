#include <gtest/gtest.h>

#include <random>

#include "ctx/kscolor.hpp"

using namespace ctx;

namespace {

// Independent rule check written against the raw lists.
bool rules_hold(const OrthogonalityStructure& s, const KsColoring& c) {
  for (auto [u, v] : s.edges)
    if (c[u] && c[v]) return false;
  for (const auto& b : s.bases) {
    int ones = 0;
    for (int v : b) ones += c[v];
    if (ones != 1) return false;
  }
  return true;
}

std::size_t brute_force_count(const OrthogonalityStructure& s) {
  const int m = static_cast<int>(s.vertices.size());
  std::size_t count = 0;
  for (std::uint32_t x = 0; x < (1u << m); ++x) {
    KsColoring c(m);
    for (int i = 0; i < m; ++i) c[i] = (x >> i) & 1u;
    count += rules_hold(s, c);
  }
  return count;
}

}  // namespace

TEST(Structure, Validation) {
  EXPECT_THROW(make_structure({"a", "a"}, {}, {}), DataError);
  EXPECT_THROW(make_structure({"a", "b"}, {{"a", "c"}}, {}), DataError);
  EXPECT_THROW(make_structure({"a", "b", "c"}, {{"a", "b"}}, {{"a", "b", "c"}}), DataError);  // basis not a clique
  auto s = make_structure({"a", "b"}, {{"b", "a"}}, {{"a", "b"}});
  EXPECT_EQ(s.index("b"), 1);
  EXPECT_THROW(s.index("z"), DataError);
}

TEST(Coloring, SingleBasis) {
  auto s = make_structure({"a", "b", "c"}, {{"a", "b"}, {"a", "c"}, {"b", "c"}}, {{"a", "b", "c"}});
  auto r = enumerate_colorings(s);
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(r.colorings.size(), 3u);
  EXPECT_FALSE(parity_certificate(s).has_value());
}

TEST(Coloring, TwoDisjointBases) {
  auto s = make_structure({"a", "b", "c", "d"}, {{"a", "b"}, {"c", "d"}}, {{"a", "b"}, {"c", "d"}});
  EXPECT_EQ(enumerate_colorings(s).colorings.size(), 4u);
  EXPECT_FALSE(parity_certificate(s).has_value());
}

TEST(Coloring, OddCycleOfBasesHasCertificate) {
  // Three 2-element bases in a triangle: each vertex in two bases, three bases.
  auto s = make_structure({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}}, {{"a", "b"}, {"b", "c"}, {"a", "c"}});
  auto cert = parity_certificate(s);
  ASSERT_TRUE(cert.has_value());
  EXPECT_EQ(cert->bases % 2, 1);
  EXPECT_TRUE(enumerate_colorings(s).colorings.empty());
}

TEST(Coloring, AgreesWithBruteForce) {
  std::mt19937 g(31);
  for (int t = 0; t < 40; ++t) {
    const int m = std::uniform_int_distribution<int>(3, 12)(g);
    std::vector<std::string> names;
    for (int i = 0; i < m; ++i) names.push_back("v" + std::to_string(i));
    std::vector<std::vector<std::string>> bases;
    std::set<std::pair<std::string, std::string>> edge_set;
    const int nb = std::uniform_int_distribution<int>(1, 5)(g);
    for (int b = 0; b < nb; ++b) {
      std::vector<int> idx(m);
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), g);
      const int size = std::uniform_int_distribution<int>(2, std::min(4, m))(g);
      std::vector<std::string> basis;
      for (int i = 0; i < size; ++i) basis.push_back(names[idx[i]]);
      for (int i = 0; i < size; ++i)
        for (int j = i + 1; j < size; ++j) edge_set.insert(std::minmax(basis[i], basis[j]));
      bases.push_back(basis);
    }
    for (int e = 0; e < 3; ++e) {
      int u = std::uniform_int_distribution<int>(0, m - 1)(g), v = std::uniform_int_distribution<int>(0, m - 1)(g);
      if (u != v) edge_set.insert(std::minmax(names[u], names[v]));
    }
    auto s = make_structure(names, {edge_set.begin(), edge_set.end()}, bases);
    auto r = enumerate_colorings(s);
    ASSERT_TRUE(r.exact);
    EXPECT_EQ(r.colorings.size(), brute_force_count(s));
    std::set<KsColoring> unique(r.colorings.begin(), r.colorings.end());
    EXPECT_EQ(unique.size(), r.colorings.size());
    for (const auto& c : r.colorings) {
      EXPECT_TRUE(rules_hold(s, c));
      EXPECT_TRUE(satisfies_ks_rules(s, c));
    }
    if (parity_certificate(s)) EXPECT_TRUE(r.colorings.empty());
  }
}

TEST(Coloring, CapIsReported) {
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> bases;
  for (int i = 0; i < 10; ++i) {
    names.push_back("a" + std::to_string(i));
    names.push_back("b" + std::to_string(i));
    bases.push_back({"a" + std::to_string(i), "b" + std::to_string(i)});
  }
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& b : bases) edges.push_back({b[0], b[1]});
  auto s = make_structure(names, edges, bases);
  EXPECT_EQ(enumerate_colorings(s).colorings.size(), 1024u);
  auto capped = enumerate_colorings(s, 100);
  EXPECT_FALSE(capped.exact);
  EXPECT_EQ(capped.colorings.size(), 100u);
}

TEST(Ceg18, NoColoringWithCertificate) {
  auto s = structure_from_dataset(ceg18());
  EXPECT_EQ(s.vertices.size(), 18u);
  EXPECT_EQ(s.bases.size(), 9u);
  auto r = enumerate_colorings(s);
  EXPECT_TRUE(r.exact);
  EXPECT_TRUE(r.colorings.empty());
  auto cert = parity_certificate(s);
  ASSERT_TRUE(cert.has_value());
  EXPECT_EQ(cert->bases, 9);
  for (int m : cert->multiplicity) EXPECT_EQ(m, 2);
}

TEST(YuOh, Report) {
  auto r = yu_oh_check();
  EXPECT_GT(r.colorings, 0u);
  EXPECT_TRUE(r.colorings_exact);
  EXPECT_EQ(r.max_h_sum, 1);
  EXPECT_TRUE(r.all_within_one);
  EXPECT_NEAR(r.quantum_h_sum, 4.0 / 3, 1e-12);
  EXPECT_TRUE(r.quantum_verified);
  EXPECT_TRUE(r.contradiction);
  EXPECT_TRUE(r.h0_h1_trace.conflict);
  auto s = structure_from_dataset(yuoh13());
  EXPECT_EQ(r.h0_h1_trace.values[s.index("z2")], 1);
  EXPECT_EQ(r.h0_h1_trace.values[s.index("z3")], 1);
  // Independent recount of the colorings and of Σ h.
  auto cols = enumerate_colorings(s);
  EXPECT_EQ(cols.colorings.size(), brute_force_count(s));
  for (const auto& c : cols.colorings) {
    int h = c[s.index("h0")] + c[s.index("h1")] + c[s.index("h2")] + c[s.index("h3")];
    EXPECT_LE(h, 1);
  }
}

TEST(Propagation, SimpleChain) {
  auto s = make_structure({"a", "b", "c"}, {{"a", "b"}, {"a", "c"}, {"b", "c"}}, {{"a", "b", "c"}});
  auto t = propagate(s, {{"a", 0}, {"b", 0}});
  EXPECT_FALSE(t.conflict);
  EXPECT_EQ(t.values[2], 1);
  auto bad = propagate(s, {{"a", 1}, {"b", 1}});
  EXPECT_TRUE(bad.conflict);
  EXPECT_FALSE(bad.conflict_reason.empty());
}

TEST(PeresMermin, Report) {
  auto r = peres_mermin_check();
  EXPECT_EQ(r.assignments, 512);
  EXPECT_EQ(r.satisfying, 0);
  EXPECT_EQ(r.relaxed_satisfying, 16);
  EXPECT_EQ(r.nc_maximum, 4);
  EXPECT_TRUE(r.quantum_verified);
}

TEST(NcMaximum, MatchesDirectEnumeration) {
  auto c = ceg18_case();
  auto m = nc_maximum(c.inequality);
  EXPECT_EQ(m.value, 7);
  EXPECT_EQ(m.assignments, std::uint64_t{1} << 18);
  EXPECT_EQ(c.inequality.evaluate(assignment_point(c.inequality.scenario, m.argmax)), 7);
}
