#include <gtest/gtest.h>

#include <cmath>

#include "ctx/onto.hpp"

using namespace ctx;

namespace {

constexpr std::uint64_t kN = 200000;

Vec3 neg(const Vec3& v) { return {-v[0], -v[1], -v[2]}; }

CVector ket_of(const Vec3& v) {
  // Pure qubit state with Bloch vector v.
  double theta = std::acos(std::clamp(v[2], -1.0, 1.0)), phi = std::atan2(v[1], v[0]);
  CVector k(2);
  k << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
  return k;
}

}  // namespace

TEST(Rng, Reproducible) {
  Rng a(42, 1), b(42, 1), c(42, 2);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    auto x = a.next(), y = b.next();
    EXPECT_EQ(x, y);
    differs = differs || x != c.next();
  }
  EXPECT_TRUE(differs);
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    double u = r.uniform();
    ASSERT_GE(u, 0);
    ASSERT_LT(u, 1);
    Vec3 s = r.sphere();
    ASSERT_NEAR(s[0] * s[0] + s[1] * s[1] + s[2] * s[2], 1, 1e-12);
  }
}

TEST(Rng, SphereIsUniform) {
  // Archimedes: z is uniform on [-1, 1].
  Rng r(9);
  const int n = 100000;
  int bins[4] = {0, 0, 0, 0};
  for (int i = 0; i < n; ++i) ++bins[std::min(3, int((r.sphere()[2] + 1) * 2))];
  for (int b : bins) EXPECT_NEAR(b / double(n), 0.25, 5 * std::sqrt(0.25 * 0.75 / n));
}

TEST(Query, StandardErrorFallback) {
  auto q = probability_query("p", 0, 100, 0.5);
  EXPECT_EQ(q.std_error, 0);
  EXPECT_NEAR(q.z, -10, 1e-12);
  auto exact = probability_query("p", 100, 100, 1.0);
  EXPECT_EQ(exact.z, 0);
}

TEST(Ks, Examples) {
  Vec3 z{0, 0, 1}, x{1, 0, 0};
  auto same = ks_model(z, z, kN, 1);
  EXPECT_EQ(same.queries[0].estimate, 1);
  EXPECT_EQ(same.queries[0].z, 0);
  EXPECT_EQ(ks_model(z, neg(z), kN, 1).queries[0].estimate, 0);
  auto ortho = ks_model(z, x, kN, 1);
  EXPECT_LE(std::abs(ortho.queries[0].z), 5);
  EXPECT_NEAR(ortho.queries[0].target, 0.5, 1e-15);
  EXPECT_THROW(ks_model(Vec3{0, 0, 2}, z, 10, 1), DataError);
}

TEST(Ks, BornGrid) {
  for (int i = 0; i < 6; ++i) {
    Vec3 psi = bloch_from_angles(0.4 * i, 0.9 * i);
    Vec3 phi = bloch_from_angles(0.5 + 0.3 * i, 2.0 - 0.7 * i);
    auto r = ks_model(psi, phi, kN, 100 + i);
    EXPECT_LE(r.max_abs_z(), 5) << i;
  }
}

TEST(Ks, SamplesSupportedOnHemisphere) {
  Vec3 psi = bloch_from_angles(1.0, 0.3);
  Rng rng(3, 1);
  for (int i = 0; i < 10000; ++i) {
    Vec3 l = ks_sample(psi, rng);
    ASSERT_GE(psi[0] * l[0] + psi[1] * l[1] + psi[2] * l[2], 0);
  }
}

TEST(Ks, Reproducible) {
  Vec3 psi = bloch_from_angles(0.3, 0.2), phi = bloch_from_angles(1.3, 2.2);
  auto a = ks_model(psi, phi, 50000, 5), b = ks_model(psi, phi, 50000, 5);
  EXPECT_EQ(a.queries[0].estimate, b.queries[0].estimate);
  EXPECT_NE(a.queries[0].estimate, ks_model(psi, phi, 50000, 6).queries[0].estimate);
}

TEST(Bell, QubitExamples) {
  CVector zero = ket({1, 0});
  CMatrix p0 = projector(zero), p1 = projector(ket({0, 1}));
  EXPECT_EQ(bell_qubit_model(zero, p0, p1, kN, 1).queries[0].estimate, 1);
  CMatrix plus = projector(ket({1, 1})), minus = projector(ket({1, -1}));
  auto r = bell_qubit_model(zero, plus, minus, kN, 1);
  EXPECT_LE(std::abs(r.queries[0].z), 5);
  EXPECT_EQ(r.model, "bell");
  EXPECT_THROW(bell_qubit_model(zero, plus, plus, 10, 1), DataError);
}

TEST(Bell, GeneralReducesToQubit) {
  CVector psi = ket_of(bloch_from_angles(0.8, 1.1));
  CMatrix a = projector(ket_of(bloch_from_angles(2.0, 0.4)));
  CMatrix b = identity(2) - a;
  auto q = bell_qubit_model(psi, a, b, kN, 3);
  auto g = bell_general_model(psi, {a, b}, kN, 3);
  EXPECT_EQ(q.queries[0].estimate, g.queries[0].estimate);
}

TEST(Bell, QutritExamples) {
  CVector zero = ket({1, 0, 0});
  std::vector<CMatrix> comp = {projector(ket({1, 0, 0})), projector(ket({0, 1, 0})), projector(ket({0, 0, 1}))};
  auto r = bell_general_model(zero, comp, kN, 2);
  EXPECT_EQ(r.queries[0].estimate, 1);
  EXPECT_EQ(r.queries[1].estimate, 0);
  EXPECT_EQ(r.queries[2].estimate, 0);
  // Fourier basis against a generic state.
  const double w = 2 * M_PI / 3;
  std::vector<CMatrix> fourier;
  for (int k = 0; k < 3; ++k)
    fourier.push_back(projector(ket({1, std::polar(1.0, w * k), std::polar(1.0, 2 * w * k)})));
  CVector psi = ket({Complex(0.6, 0.1), Complex(-0.3, 0.5), Complex(0.2, 0.2)});
  psi.normalize();
  auto g = bell_general_model(psi, fourier, kN, 4);
  EXPECT_LE(g.max_abs_z(), 5);
  DensityState rho = DensityState::pure(psi);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(g.queries[k].target, born(rho, fourier[k]), 1e-12);
}

TEST(Bell, ExactlyOneInterval) {
  std::vector<double> probs = {0.2, 0.0, 0.5, 0.3};
  Rng rng(7);
  for (int i = 0; i < 20000; ++i) {
    double l = i == 0 ? 0.0 : (i == 1 ? 1.0 : rng.uniform());
    int count = 0;
    for (int k = 0; k < 4; ++k) count += bell_indicator(probs, k, l);
    ASSERT_EQ(count, 1) << l;
    // Deterministic response: same inputs, same outcome.
    ASSERT_EQ(bell_response(probs, l), bell_response(probs, l));
  }
  EXPECT_EQ(bell_response(probs, 0.2), 0);
  EXPECT_EQ(bell_response(probs, 0.2000001), 2);
}

TEST(Bell, PvmValidation) {
  EXPECT_THROW(validate_pvm({}, 2), DataError);
  EXPECT_THROW(validate_pvm({identity(2) * 0.5, identity(2) * 0.5}, 2), DataError);
  EXPECT_THROW(validate_pvm({projector(ket({1, 0}))}, 2), DataError);
  EXPECT_NO_THROW(validate_pvm({identity(3)}, 3));
}

TEST(BellMermin, Examples) {
  Vec3 z{0, 0, 1};
  auto sz = bell_mermin_model(z, qubit_observable(pauli_z()), kN, 1);
  EXPECT_EQ(sz.queries[0].estimate, 1);
  auto sx = bell_mermin_model(z, qubit_observable(pauli_x()), kN, 1);
  EXPECT_LE(std::abs(sx.queries[0].z), 5);
  CMatrix a = 0.3 * identity(2) + 0.5 * pauli_x() - 0.2 * pauli_y() + 0.7 * pauli_z();
  auto obs = qubit_observable(a);
  EXPECT_LE(max_abs(qubit_matrix(obs) - a), 1e-15);
  Vec3 psi = bloch_from_angles(1.2, 0.6);
  auto g = bell_mermin_model(psi, obs, kN, 2);
  EXPECT_LE(std::abs(g.queries[0].z), 5);
  EXPECT_NEAR(g.queries[0].target, expectation(bloch_projector(psi), a), 1e-12);
}

TEST(BellMermin, ResponseIsEigenvalue) {
  auto obs = qubit_observable(0.3 * identity(2) + 0.5 * pauli_x());
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    double v = bell_mermin_response(obs, rng.sphere(), rng.sphere());
    ASSERT_TRUE(std::abs(v - 0.8) < 1e-15 || std::abs(v + 0.2) < 1e-15);
  }
}

TEST(BellMermin, Additivity) {
  auto a = qubit_observable(0.1 * identity(2) + 0.6 * pauli_x() + 0.8 * pauli_z());
  QubitObservable b{0.4, {1.2, 0, 1.6}};
  EXPECT_TRUE(bell_mermin_additivity_check(a, b, 20000, 1).additive);
  EXPECT_TRUE(bell_mermin_additivity_check(QubitObservable{}, a, 2000, 1).additive);
  auto rep = bell_mermin_additivity_check(qubit_observable(pauli_x()), qubit_observable(pauli_z()), 2000, 1);
  EXPECT_FALSE(rep.additive);
  ASSERT_TRUE(rep.witness.has_value());
  EXPECT_NE(rep.witness->joint, rep.witness->sum);
  // Re-evaluate the witness independently.
  const auto& w = *rep.witness;
  double sx = (w.lambda[0] + w.psi_hat[0]) >= 0 ? 1 : -1, sz = (w.lambda[2] + w.psi_hat[2]) >= 0 ? 1 : -1;
  double joint = std::sqrt(2.0) * ((w.lambda[0] + w.psi_hat[0] + w.lambda[2] + w.psi_hat[2]) >= 0 ? 1 : -1);
  EXPECT_NEAR(w.sum, sx + sz, 1e-15);
  EXPECT_NEAR(w.joint, joint, 1e-12);
}

TEST(Ljbr, NorthPoleAndF) {
  EXPECT_DOUBLE_EQ(ljbr_f({0, 0, 1}), 0.5);
  EXPECT_NEAR(ljbr_f(bloch_from_angles(M_PI / 2, 0)), 0, 1e-15);
  EXPECT_NEAR(ljbr_f(bloch_from_angles(0.5, 0)), 0.5 * (1 + std::cos(0.5 + M_PI / 2)), 1e-15);
  EXPECT_TRUE(in_north({0, 0, 1}));
  EXPECT_FALSE(in_north({1, 0, 0}));
}

TEST(Ljbr, BornGrid) {
  for (int i = 0; i < 8; ++i) {
    Vec3 psi = bloch_from_angles(0.15 + 0.35 * i, 0.8 * i);
    Vec3 phi = bloch_from_angles(2.9 - 0.33 * i, 0.5 + 1.1 * i);
    auto r = ljbr_qubit_model(psi, phi, kN, 40 + i);
    EXPECT_LE(r.max_abs_z(), 5) << i;
    auto anti = ljbr_qubit_model(psi, neg(phi), kN, 40 + i);
    EXPECT_LE(anti.max_abs_z(), 5) << i;
  }
}

TEST(Ljbr, OverlapBranchOccurs) {
  Vec3 a = bloch_from_angles(0.3, 0.0), b = bloch_from_angles(0.6, 2.0);
  for (const auto& psi : {a, b}) {
    Rng rng(11, 5);
    int hits = 0;
    for (int i = 0; i < 20000; ++i) hits += ljbr_sample(psi, rng).overlap_branch;
    EXPECT_GT(hits, 0);
    EXPECT_NEAR(hits / 20000.0, ljbr_f(psi), 5 * std::sqrt(0.25 / 20000));
  }
  Rng rng(1, 5);
  Vec3 south = bloch_from_angles(2.0, 0.1);
  for (int i = 0; i < 1000; ++i) ASSERT_FALSE(ljbr_sample(south, rng).overlap_branch);
}

TEST(Overlap, Models) {
  const std::uint64_t n = 200000;
  Vec3 psi = bloch_from_angles(0.4, 0.2), phi = bloch_from_angles(0.9, 1.5);
  auto bell = psi_ontic_overlap(bell_ontic_samples(psi, n, 1), bell_ontic_samples(phi, n, 2));
  EXPECT_EQ(bell.overlap, 0);
  auto ks = psi_ontic_overlap(ks_ontic_samples(psi, n, 1), ks_ontic_samples(phi, n, 2));
  EXPECT_GT(ks.overlap, 0.3);
  EXPECT_GT(ks.shared_cells, 0u);
  // Antipodal supports are disjoint; only cells cut by the boundary circle are
  // shared, and their weight shrinks as the grid is refined.
  auto ka = ks_ontic_samples(psi, n, 1), kb = ks_ontic_samples(neg(psi), n, 2);
  auto anti = psi_ontic_overlap(ka, kb);
  auto fine = psi_ontic_overlap(ka, kb, OverlapGrid{400, 400, 1});
  EXPECT_LT(anti.overlap, 0.01);
  EXPECT_LT(fine.overlap, anti.overlap);
  EXPECT_LT(fine.overlap, 0.002);
  auto lj = psi_ontic_overlap(ljbr_ontic_samples(psi, n, 1), ljbr_ontic_samples(phi, n, 2));
  EXPECT_GT(lj.overlap, 0);
  auto self = psi_ontic_overlap(ks_ontic_samples(psi, n, 1), ks_ontic_samples(psi, n, 1));
  EXPECT_NEAR(self.overlap, 1, 1e-12);
}
