// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "ctx/csw.hpp"
#include "ctx/datasets.hpp"
#include "ctx/kscolor.hpp"
#include "ctx/ncycle.hpp"
#include "ctx/onto.hpp"
#include "ctx/polytope.hpp"
#include "ctx/quantum.hpp"

using namespace ctx;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void run(int id, const std::string& title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && secs > limit_s) {
    o.pass = false;
    o.detail << " [runtime " << secs << " s over limit " << limit_s << " s]";
  }
  std::printf("C%-2d %s  %s (%.2f s)%s\n", id, o.pass ? "PASS" : "FAIL", title.c_str(), secs, o.detail.str().c_str());
  std::fflush(stdout);
  failures += !o.pass;
}

std::set<Halfspace> normalized_set(const std::vector<Halfspace>& hs) {
  std::set<Halfspace> out;
  for (const auto& h : hs) out.insert(normalize(h));
  return out;
}

// Pair-table marginals agree on shared observables.
double max_disturbance(const MarginalScenario& s, const FloatModel& m) {
  double worst = 0;
  for (int i = 0; i < s.num_contexts(); ++i)
    for (int j = i + 1; j < s.num_contexts(); ++j) {
      Context shared;
      const auto &a = s.contexts()[i], &b = s.contexts()[j];
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(shared));
      if (shared.empty()) continue;
      auto pa = marginalize(m.table(i), a, shared), pb = marginalize(m.table(j), b, shared);
      for (std::size_t o = 0; o < pa.size(); ++o) worst = std::max(worst, std::abs(pa[o] - pb[o]));
    }
  return worst;
}

double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// Unit vector at angle `angle` from v, in a plane fixed by `phase`.
Vec3 rotated(const Vec3& v, double angle, double phase) {
  Vec3 t = std::abs(v[2]) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
  Vec3 u{v[1] * t[2] - v[2] * t[1], v[2] * t[0] - v[0] * t[2], v[0] * t[1] - v[1] * t[0]};
  double nu = std::sqrt(dot3(u, u));
  for (auto& x : u) x /= nu;
  Vec3 w{v[1] * u[2] - v[2] * u[1], v[2] * u[0] - v[0] * u[2], v[0] * u[1] - v[1] * u[0]};
  Vec3 out;
  for (int i = 0; i < 3; ++i)
    out[i] = std::cos(angle) * v[i] + std::sin(angle) * (std::cos(phase) * u[i] + std::sin(phase) * w[i]);
  double n = std::sqrt(dot3(out, out));
  for (auto& x : out) x /= n;
  return out;
}

CVector ket_of(const Vec3& v) {
  double theta = std::acos(std::clamp(v[2], -1.0, 1.0)), phi = std::atan2(v[1], v[0]);
  CVector k(2);
  k << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
  return k;
}

// 20 (state, measurement) direction pairs spread over the sphere.
std::vector<std::pair<Vec3, Vec3>> direction_grid() {
  std::vector<std::pair<Vec3, Vec3>> g;
  for (int i = 0; i < 20; ++i) {
    double th = std::acos(1 - 2 * (i + 0.5) / 20.0), ph = i * 2.399963229728653;
    Vec3 psi = bloch_from_angles(th, ph);
    g.push_back({psi, rotated(psi, M_PI * (i + 0.5) / 20.0, 0.7 * i)});
  }
  return g;
}

}  // namespace

int main() {
  run(1, "polytope counts n=3..6", 60, [](Outcome& o) {
    for (int n = 3; n <= 6; ++n) {
      const std::size_t nc_v = std::size_t{1} << n, nc_f = 4 * n + (std::size_t{1} << (n - 1)),
                        nd_v = (std::size_t{1} << n) + (std::size_t{1} << (n - 1)), nd_f = 4 * n;
      auto s = ncycle_scenario(n);
      auto ncv = nc_vertices(s);
      auto ncf = facet_enumeration(ncv);
      auto ndv = vertex_enumeration(nd_halfspaces(n), 2 * n);
      auto ndf = facet_enumeration(ndv);
      o.detail << " n=" << n << ":" << ncv.vertices.size() << "/" << ncf.size() << "/" << ndv.vertices.size() << "/"
               << ndf.size();
      o.require(ncv.vertices.size() == nc_v, "NC vertices");
      o.require(ncf.size() == nc_f, "NC facets");
      o.require(ndv.vertices.size() == nd_v, "ND vertices");
      o.require(ndf.size() == nd_f, "ND facets");
    }
  });

  run(2, "3-cycle facets = 12 positivity + 4 Boole", 0, [](Outcome& o) {
    auto s = ncycle_scenario(3);
    auto facets = normalized_set(facet_enumeration(nc_vertices(s)));
    std::set<Halfspace> expected = normalized_set(positivity_inequalities(s, true));
    o.require(expected.size() == 12, "12 distinct positivity inequalities");
    // Coordinates: <X0>,<X1>,<X2>,<X0X1>,<X0X2>,<X1X2>.
    for (auto g : std::vector<std::array<int, 3>>{{-1, -1, -1}, {-1, 1, 1}, {1, -1, 1}, {1, 1, -1}})
      expected.insert(normalize({{0, 0, 0, g[0], g[1], g[2]}, 1}));
    o.detail << " facets=" << facets.size();
    o.require(facets == expected, "facet set equals positivity plus the four Boole inequalities");
  });

  run(3, "OSp contextual with certificate -<X0X1>-<X1X2>-<X2X0> <= 1", 0, [](Outcome& o) {
    auto s = ncycle_scenario(3);
    ExactExpectations e{s, {0, 0, 0, -1, -1, -1}};
    auto v = decide_contextuality(e);
    o.require(v.contextual, "verdict contextual");
    o.require(v.certificate && v.certificate->h == normalize({{0, 0, 0, -1, -1, -1}, 1}), "certificate");
    o.detail << " violation=" << to_string(v.violation);
  });

  run(4, "quantum bounds B_3..B_6 and no-disturbance", 0, [](Outcome& o) {
    const double expected[] = {1.0, 2 * std::sqrt(2.0), 4 * std::sqrt(5.0) - 5, 6 * std::cos(M_PI / 6)};
    for (int n = 3; n <= 6; ++n) {
      auto r = quantum_realization(n);
      auto s = ncycle_scenario(n);
      auto m = realize_model(s, r.as_realization());
      auto e = probs_to_expectations(m);
      double value = 0;
      for (int i = 0; i < n; ++i) value += r.target[i] * e.entries[ncycle_pair_index(s, n, i)];
      double dev = std::abs(value - expected[n - 3]), dist = max_disturbance(s, m);
      o.detail << " B" << n << " dev=" << dev << " nd=" << dist;
      o.require(dev <= 1e-9, "B_" + std::to_string(n));
      o.require(dist <= 1e-12, "no-disturbance n=" + std::to_string(n));
    }
  });

  run(5, "Lovasz theta vs closed forms and 2theta-n", 120, [](Outcome& o) {
    double worst = 0, worst_bound = 0;
    for (int n : {3, 5, 7, 9}) {
      double c = std::cos(M_PI / n);
      double th = lovasz_theta(prism_graph(n)).value;
      worst = std::max(worst, std::abs(th - 2 * n * c / (1 + c)));
      worst_bound = std::max(worst_bound, std::abs(2 * th - n - quantum_bound_closed_form(n)));
    }
    for (int n : {4, 6, 8, 10}) {
      double c = std::cos(M_PI / n);
      double th = lovasz_theta(mobius_ladder(n)).value;
      worst = std::max(worst, std::abs(th - 0.5 * n * (1 + c)));
      worst_bound = std::max(worst_bound, std::abs(2 * th - n - quantum_bound_closed_form(n)));
    }
    const double b[] = {1.0, 2 * std::sqrt(2.0), 4 * std::sqrt(5.0) - 5, 6 * std::cos(M_PI / 6)};
    for (int n = 3; n <= 6; ++n) {
      auto r = quantum_realization(n);
      double q = quantum_max(ncycle_inequality(n, r.target)).value;
      worst_bound = std::max(worst_bound, std::abs(q - b[n - 3]));
    }
    o.detail << " max|theta-closed|=" << worst << " max|2theta-n-B|=" << worst_bound;
    o.require(worst <= 1e-5, "closed forms");
    o.require(worst_bound <= 1e-5, "2theta-n");
  });

  run(6, "state-independent suite", 120, [](Outcome& o) {
    struct Want {
      StateIndependentCase c;
      double multiple;
      int nc_max;
      std::uint64_t assignments;
    };
    for (const auto& w : {Want{peres_mermin_case(), 6, 4, 512}, Want{ceg18_case(), 9, 7, 1u << 18},
                          Want{yuoh_case(), 25 + 8.0 / 3, 25, 1u << 13}}) {
      CMatrix op = inequality_operator(w.c.inequality, w.c.realization);
      double dev = max_abs(op - w.multiple * identity(static_cast<int>(op.rows())));
      auto m = nc_maximum(w.c.inequality);
      o.detail << " " << w.c.name << ": dev=" << dev << " nc=" << to_string(m.value);
      o.require(dev <= 1e-10, w.c.name + " operator");
      o.require(m.value == w.nc_max && m.assignments == w.assignments, w.c.name + " NC maximum");
    }
  });

  run(7, "KS colorability", 0, [](Outcome& o) {
    auto ceg = structure_from_dataset(ceg18());
    auto cc = enumerate_colorings(ceg);
    o.require(cc.exact && cc.colorings.empty(), "CEG-18 has no coloring");
    o.require(parity_certificate(ceg).has_value(), "CEG-18 parity certificate");

    auto yo_set = yuoh13();
    auto yo = structure_from_dataset(yo_set);
    auto yc = enumerate_colorings(yo);
    int max_h = 0;
    for (const auto& c : yc.colorings) {
      int h = 0;
      for (const char* l : {"h0", "h1", "h2", "h3"}) h += c[yo.index(l)];
      max_h = std::max(max_h, h);
    }
    CMatrix hsum = CMatrix::Zero(3, 3);
    for (const char* l : {"h0", "h1", "h2", "h3"}) hsum += yo_set.op(l);
    double q = hsum.trace().real() / 3;
    o.require(yc.exact && !yc.colorings.empty(), "Yu-Oh colorable");
    o.require(max_h <= 1, "sum v(h) <= 1");
    o.require(std::abs(q - 4.0 / 3) <= 1e-12 && max_abs(hsum - q * identity(3)) <= 1e-12, "quantum 4/3");
    o.detail << " YO colorings=" << yc.colorings.size() << " max sum h=" << max_h;

    // Peres–Mermin: every row/column product relation of the dataset, over all 512 ±1 assignments.
    auto pm = peres_mermin9();
    std::vector<std::pair<std::vector<int>, int>> constraints;
    for (const auto& r : pm.relations) {
      if (r.type != RelationType::ProductEquals) continue;
      std::vector<int> idx;
      for (const auto& l : r.labels) idx.push_back(std::find(pm.labels.begin(), pm.labels.end(), l) - pm.labels.begin());
      constraints.push_back({idx, r.scalar > 0 ? 1 : -1});
    }
    int satisfying = 0;
    for (int x = 0; x < 512; ++x) {
      bool ok = true;
      for (const auto& [idx, sign] : constraints) {
        int p = 1;
        for (int i : idx) p *= (x >> i) & 1 ? -1 : 1;
        ok = ok && p == sign;
      }
      satisfying += ok;
    }
    auto rep = peres_mermin_check();
    o.require(constraints.size() == 6, "six product constraints");
    o.require(satisfying == 0 && rep.satisfying == 0 && rep.assignments == 512, "PM zero of 512");
    o.detail << " PM satisfying=" << satisfying << "/512";
  });

  run(8, "dataset relations", 0, [](Outcome& o) {
    for (const auto& name : {"spekkens6", "yuoh13", "pbr", "ceg18", "peresmermin"}) {
      auto d = dataset_by_name(name);
      auto rep = verify_projector_dataset(d, 1e-10);
      double worst = 0;
      for (const auto& c : rep.checks) worst = std::max(worst, c.residual);
      o.detail << " " << name << "=" << rep.checks.size() << " checks, max residual " << worst;
      o.require(rep.pass, name);
    }
    auto ceg = ceg18();
    bool two_bases = std::any_of(ceg.relations.begin(), ceg.relations.end(), [](const Relation& r) {
      return r.type == RelationType::BasisMultiplicity && r.scalar == 2;
    });
    o.require(two_bases, "two-bases-per-vector relation declared");
  });

  run(9, "ontological simulators, 20-point grids, N=1e6", 600, [](Outcome& o) {
    const std::uint64_t N = 1000000, seed = 20240601;
    auto grid = direction_grid();
    double worst_ks = 0, worst_b2 = 0, worst_b3 = 0, worst_bm = 0, worst_lj = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      auto [psi, phi] = grid[i];
      const double born_p = born(DensityState(bloch_projector(psi)), bloch_projector(phi));

      auto ks = ks_model(psi, phi, N, seed + i);
      o.require(std::abs(ks.queries[0].target - born_p) <= 1e-12, "KS target is Born");
      worst_ks = std::max(worst_ks, ks.max_abs_z());

      CMatrix p0 = bloch_projector(phi);
      auto b2 = bell_qubit_model(ket_of(psi), p0, identity(2) - p0, N, seed + i);
      o.require(std::abs(b2.queries[0].target - born_p) <= 1e-12, "Bell d=2 target is Born");
      worst_b2 = std::max(worst_b2, b2.max_abs_z());

      // Qutrit: rotate the computational basis by a fixed unitary family.
      const double a = 0.3 + 0.13 * i, b = 1.1 - 0.07 * i;
      CVector e0 = ket({std::cos(a), std::sin(a) * std::polar(1.0, b), 0});
      CVector e1 = ket({-std::sin(a), std::cos(a) * std::polar(1.0, b), std::polar(0.5, 0.2 * i)});
      e1 -= e0 * (e0.adjoint() * e1)(0);
      e1.normalize();
      CVector e2(3);
      e2 << std::conj(e0(1) * e1(2) - e0(2) * e1(1)), std::conj(e0(2) * e1(0) - e0(0) * e1(2)),
          std::conj(e0(0) * e1(1) - e0(1) * e1(0));
      std::vector<CMatrix> pvm = {projector(e0), projector(e1), projector(e2)};
      CVector psi3 = ket({Complex(1, 0.2 * i), Complex(0.5, -0.3), Complex(0.1 * i, 0.4)});
      psi3.normalize();
      auto b3 = bell_general_model(psi3, pvm, N, seed + i);
      DensityState rho3 = DensityState::pure(psi3);
      for (int k = 0; k < 3; ++k)
        o.require(std::abs(b3.queries[k].target - born(rho3, pvm[k])) <= 1e-12, "Bell d=3 target is Born");
      worst_b3 = std::max(worst_b3, b3.max_abs_z());

      CMatrix A = (0.2 - 0.05 * i) * identity(2) + (0.5 + 0.1 * i) * (phi[0] * pauli_x() + phi[1] * pauli_y() + phi[2] * pauli_z());
      auto bm = bell_mermin_model(psi, qubit_observable(A), N, seed + i);
      o.require(std::abs(bm.queries[0].target - expectation(bloch_projector(psi), A)) <= 1e-12, "Bell-Mermin target");
      worst_bm = std::max(worst_bm, bm.max_abs_z());

      auto lj = ljbr_qubit_model(psi, phi, N, seed + i);
      o.require(std::abs(lj.queries[0].target - born_p) <= 1e-12, "LJBR target is Born");
      worst_lj = std::max(worst_lj, lj.max_abs_z());
    }
    o.detail << " max|z| ks=" << worst_ks << " bell2=" << worst_b2 << " bell3=" << worst_b3 << " bm=" << worst_bm
             << " ljbr=" << worst_lj;
    for (double z : {worst_ks, worst_b2, worst_b3, worst_bm, worst_lj}) o.require(z <= 5, "|z| <= 5");

    std::uint64_t commuting_points = 0;
    for (int k = 0; k < 5; ++k) {
      Vec3 dir = bloch_from_angles(0.4 + 0.5 * k, 1.3 * k);
      QubitObservable a{0.1 * k, {dir[0], dir[1], dir[2]}};
      double alpha = k % 2 ? -0.7 - k : 1.5 + k;
      QubitObservable b{-0.3, {alpha * dir[0], alpha * dir[1], alpha * dir[2]}};
      o.require(commute(qubit_matrix(a), qubit_matrix(b)), "pair commutes");
      auto rep = bell_mermin_additivity_check(a, b, 100000, seed + k);
      o.require(rep.additive, "commuting pair additive");
      commuting_points += rep.points;
    }
    auto xz = bell_mermin_additivity_check(qubit_observable(pauli_x()), qubit_observable(pauli_z()), 100000, seed);
    o.require(!xz.additive && xz.witness.has_value(), "sigma_x, sigma_z witness");
    if (xz.witness)
      o.detail << " additivity: " << commuting_points << " commuting points ok; witness xi_{x+z}=" << xz.witness->joint
               << " vs " << xz.witness->sum;
  });

  run(10, "Gleason counterexample measure", 0, [](Outcome& o) {
    double max_dev = 0, angle_at = 0;
    bool normalized = true;
    for (int k = 0; k < 100; ++k) {
      double rel = M_PI * k / 99.0;
      Vec3 psi = bloch_from_angles(0.2 + 0.029 * k, 0.61 * k);
      Vec3 phi = rotated(psi, rel, 0.37 * k);
      Vec3 minus{-phi[0], -phi[1], -phi[2]};
      for (int n : {1, 3, 5, 7, 9})
        normalized = normalized && gleason_counterexample(n, psi, phi) + gleason_counterexample(n, psi, minus) == 1.0;
      double dev = std::abs(gleason_counterexample(3, psi, phi) - 0.5 * (1 + dot3(psi, phi)));
      if (dev > max_dev) {
        max_dev = dev;
        angle_at = std::acos(std::clamp(dot3(psi, phi), -1.0, 1.0)) * 180 / M_PI;
      }
    }
    o.require(normalized, "value(phi) + value(-phi) == 1");
    o.require(max_dev > 0.5, "n=3 deviation above 0.5");
    o.detail << " n=3 max deviation " << max_dev << " at " << angle_at << " deg";
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures ? 1 : 0;
}
