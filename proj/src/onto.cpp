#include "ctx/onto.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "ctx/error.hpp"

namespace ctx {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

void check_samples(std::uint64_t n) {
  if (n == 0) throw DataError("sample count must be at least 1");
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed ^ (0xD1B54A32D192ED03ull * (stream + 1));
  std::seed_seq seq{splitmix64(state), splitmix64(state), splitmix64(state), splitmix64(state)};
  engine_.seed(seq);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

Vec3 Rng::sphere() {
  for (;;) {
    Vec3 g{normal_(engine_), normal_(engine_), normal_(engine_)};
    double r = norm(g);
    if (r > 1e-300) return {g[0] / r, g[1] / r, g[2] / r};
  }
}

double SimulationReport::max_abs_z() const {
  double m = 0;
  for (const auto& q : queries) m = std::max(m, std::abs(q.z));
  return m;
}

QueryResult probability_query(std::string name, std::uint64_t hits, std::uint64_t n, double target) {
  QueryResult q;
  q.name = std::move(name);
  q.target = target;
  const double nd = static_cast<double>(n);
  q.estimate = static_cast<double>(hits) / nd;
  q.std_error = std::sqrt(q.estimate * (1 - q.estimate) / nd);
  const double diff = q.estimate - target;
  double se = q.std_error;
  if (se == 0) se = std::sqrt(std::clamp(target * (1 - target), 0.0, 1.0) / nd);
  if (std::abs(diff) <= 1e-12)
    q.z = 0;
  else
    q.z = se > 0 ? diff / se : std::copysign(INFINITY, diff);
  return q;
}

void check_unit(const Vec3& v, const char* what) {
  if (!(std::abs(norm(v) - 1) <= 1e-12)) throw DataError(std::string(what) + " is not a unit Bloch vector");
}

// --- Kochen–Specker -------------------------------------------------------

Vec3 ks_sample(const Vec3& psi_hat, Rng& rng) {
  // Uniform on the hemisphere around ψ̂ (by reflection), accepted with
  // probability ψ̂·λ: density ∝ Θ(ψ̂·λ) ψ̂·λ.
  for (;;) {
    Vec3 l = rng.sphere();
    double c = dot(psi_hat, l);
    if (c < 0) {
      l = {-l[0], -l[1], -l[2]};
      c = -c;
    }
    if (rng.uniform() < c) return l;
  }
}

int ks_response(const Vec3& phi_hat, const Vec3& lambda) { return dot(phi_hat, lambda) > 0 ? 1 : 0; }

SimulationReport ks_model(const Vec3& psi_hat, const Vec3& phi_hat, std::uint64_t n, std::uint64_t seed) {
  check_unit(psi_hat, "psi");
  check_unit(phi_hat, "phi");
  check_samples(n);
  Rng rng(seed, 1);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n; ++i) hits += ks_response(phi_hat, ks_sample(psi_hat, rng));
  SimulationReport r;
  r.model = "ks";
  r.samples = n;
  r.seed = seed;
  r.queries.push_back(probability_query("p(phi|psi)", hits, n, 0.5 * (1 + dot(phi_hat, psi_hat))));
  return r;
}

// --- Bell -----------------------------------------------------------------

void validate_pvm(const std::vector<CMatrix>& pvm, int dim) {
  if (pvm.empty()) throw DataError("empty PVM");
  if (dim < 1 || dim > 16) throw DataError("PVM dimension must lie in 1..16");
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (const auto& p : pvm) {
    if (p.rows() != dim || p.cols() != dim) throw DataError("PVM element has the wrong dimension");
    if (!is_projector(p)) throw DataError("PVM element is not a projector");
    sum += p;
  }
  if (max_abs(sum - identity(dim)) > 1e-10) throw DataError("PVM elements do not sum to identity");
}

std::vector<double> pvm_probabilities(const CVector& psi, const std::vector<CMatrix>& pvm) {
  if (std::abs(psi.norm() - 1) > 1e-10) throw DataError("state vector is not normalized");
  validate_pvm(pvm, static_cast<int>(psi.size()));
  std::vector<double> p;
  for (const auto& e : pvm) p.push_back(std::clamp((psi.adjoint() * e * psi)(0, 0).real(), 0.0, 1.0));
  return p;
}

int bell_indicator(const std::vector<double>& probs, int k, double lambda) {
  if (k == 0 && lambda == 0) return 1;
  double lo = 0, hi = 0;
  for (int i = 0; i <= k; ++i) {
    lo = hi;
    hi += probs[i];
  }
  // The running sum can fall short of 1 by rounding; the last interval closes at 1.
  if (k + 1 == static_cast<int>(probs.size())) hi = 1;
  return lo < lambda && lambda <= hi ? 1 : 0;
}

int bell_response(const std::vector<double>& probs, double lambda) {
  const int d = static_cast<int>(probs.size());
  for (int k = 0; k < d; ++k)
    if (bell_indicator(probs, k, lambda)) return k;
  throw SolverError("Bell response: no outcome interval contains λ");
}

SimulationReport bell_general_model(const CVector& psi, const std::vector<CMatrix>& pvm, std::uint64_t n,
                                    std::uint64_t seed) {
  check_samples(n);
  const auto probs = pvm_probabilities(psi, pvm);
  Rng rng(seed, 2);
  std::vector<std::uint64_t> hits(probs.size(), 0);
  for (std::uint64_t i = 0; i < n; ++i) ++hits[bell_response(probs, rng.uniform())];
  SimulationReport r;
  r.model = "bell-general";
  r.samples = n;
  r.seed = seed;
  for (std::size_t k = 0; k < probs.size(); ++k)
    r.queries.push_back(probability_query("p(" + std::to_string(k) + ")", hits[k], n, probs[k]));
  return r;
}

SimulationReport bell_qubit_model(const CVector& psi, const CMatrix& pi0, const CMatrix& pi1, std::uint64_t n,
                                  std::uint64_t seed) {
  if (psi.size() != 2) throw DataError("Bell qubit model needs a qubit state");
  auto r = bell_general_model(psi, {pi0, pi1}, n, seed);
  r.model = "bell";
  r.queries.resize(1);
  return r;
}

// --- Bell–Mermin ----------------------------------------------------------

QubitObservable qubit_observable(const CMatrix& a) {
  if (a.rows() != 2 || a.cols() != 2 || !is_hermitian(a)) throw DataError("qubit observable must be Hermitian 2x2");
  QubitObservable o;
  o.a0 = a.trace().real() / 2;
  o.a = {(a * pauli_x()).trace().real() / 2, (a * pauli_y()).trace().real() / 2,
         (a * pauli_z()).trace().real() / 2};
  return o;
}

CMatrix qubit_matrix(const QubitObservable& a) {
  return a.a0 * identity(2) + a.a[0] * pauli_x() + a.a[1] * pauli_y() + a.a[2] * pauli_z();
}

double bell_mermin_response(const QubitObservable& a, const Vec3& psi_hat, const Vec3& lambda) {
  const double s = dot(a.a, add(lambda, psi_hat));
  return a.a0 + norm(a.a) * (s >= 0 ? 1.0 : -1.0);
}

SimulationReport bell_mermin_model(const Vec3& psi_hat, const QubitObservable& a, std::uint64_t n,
                                   std::uint64_t seed) {
  check_unit(psi_hat, "psi");
  check_samples(n);
  Rng rng(seed, 3);
  // Welford accumulation of the mean and variance.
  double mean = 0, m2 = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    double x = bell_mermin_response(a, psi_hat, rng.sphere());
    double delta = x - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (x - mean);
  }
  QueryResult q;
  q.name = "<A>";
  q.estimate = mean;
  q.target = a.a0 + dot(a.a, psi_hat);
  q.std_error = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0;
  const double diff = q.estimate - q.target;
  if (std::abs(diff) <= 1e-12)
    q.z = 0;
  else
    q.z = q.std_error > 0 ? diff / q.std_error : std::copysign(INFINITY, diff);
  SimulationReport r;
  r.model = "bell-mermin";
  r.samples = n;
  r.seed = seed;
  r.queries.push_back(q);
  return r;
}

AdditivityReport bell_mermin_additivity_check(const QubitObservable& a, const QubitObservable& b,
                                              std::uint64_t points, std::uint64_t seed) {
  QubitObservable s{a.a0 + b.a0, add(a.a, b.a)};
  Rng rng(seed, 4);
  AdditivityReport rep;
  rep.points = points;
  for (std::uint64_t i = 0; i < points; ++i) {
    Vec3 psi = rng.sphere();
    Vec3 lambda = rng.sphere();
    double joint = bell_mermin_response(s, psi, lambda);
    double sum = bell_mermin_response(a, psi, lambda) + bell_mermin_response(b, psi, lambda);
    if (std::abs(joint - sum) > 1e-12) {
      ++rep.violations;
      if (!rep.witness) rep.witness = AdditivityWitness{psi, lambda, joint, sum};
    }
  }
  rep.additive = rep.violations == 0;
  return rep;
}

// --- LJBR -----------------------------------------------------------------

double polar_angle(const Vec3& v) { return std::acos(std::clamp(v[2], -1.0, 1.0)); }

bool in_north(const Vec3& v) { return v[2] > 0; }

double ljbr_f(const Vec3& psi_hat) {
  // ½(1 + cos(θ + π/2)) = ½(1 - sin θ), with sin θ = sqrt(1 - z²) on [0, π].
  return 0.5 * (1 - std::sqrt(std::max(0.0, 1 - psi_hat[2] * psi_hat[2])));
}

LjbrSample ljbr_sample(const Vec3& psi_hat, Rng& rng) {
  if (!in_north(psi_hat)) return {psi_hat, rng.uniform(), false};
  const double f = ljbr_f(psi_hat);
  if (rng.uniform() >= f) return {psi_hat, f + (1 - f) * rng.uniform(), false};
  // Joint uniform on Λ_N: λ_ψ with density ∝ f(λ_ψ) on the hemisphere
  // (rejection against the bound ½), then λ uniform on [0, f(λ_ψ)).
  for (;;) {
    Vec3 v = rng.sphere();
    if (v[2] < 0) v = {-v[0], -v[1], -v[2]};
    if (!in_north(v)) continue;
    const double fv = ljbr_f(v);
    if (rng.uniform() * 0.5 < fv) return {v, fv * rng.uniform(), true};
  }
}

int ljbr_response(const Vec3& phi0_hat, const LjbrSample& s) {
  const double p0 = 0.5 * (1 + dot(s.lambda_psi, phi0_hat));
  return bell_response({p0, 1 - p0}, s.level);
}

SimulationReport ljbr_qubit_model(const Vec3& psi_hat, const Vec3& phi_hat, std::uint64_t n, std::uint64_t seed) {
  check_unit(psi_hat, "psi");
  check_unit(phi_hat, "phi");
  check_samples(n);
  const Vec3 anti{-phi_hat[0], -phi_hat[1], -phi_hat[2]};
  const bool caller_is_phi0 = polar_angle(phi_hat) <= polar_angle(anti);
  const Vec3& phi0 = caller_is_phi0 ? phi_hat : anti;
  Rng rng(seed, 5);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    int k = ljbr_response(phi0, ljbr_sample(psi_hat, rng));
    hits += (k == 0) == caller_is_phi0 ? 1 : 0;
  }
  SimulationReport r;
  r.model = "ljbr";
  r.samples = n;
  r.seed = seed;
  r.queries.push_back(probability_query("p(phi|psi)", hits, n, 0.5 * (1 + dot(phi_hat, psi_hat))));
  return r;
}

// --- overlap ---------------------------------------------------------------

std::vector<OnticSample> ks_ontic_samples(const Vec3& psi_hat, std::uint64_t n, std::uint64_t seed) {
  check_unit(psi_hat, "psi");
  Rng rng(seed, 6);
  std::vector<OnticSample> out(n);
  for (auto& s : out) s.direction = ks_sample(psi_hat, rng);
  return out;
}

std::vector<OnticSample> bell_ontic_samples(const Vec3& psi_hat, std::uint64_t n, std::uint64_t seed) {
  check_unit(psi_hat, "psi");
  Rng rng(seed, 7);
  std::vector<OnticSample> out(n);
  for (auto& s : out) {
    s.direction = psi_hat;
    s.level = rng.uniform();
  }
  return out;
}

std::vector<OnticSample> ljbr_ontic_samples(const Vec3& psi_hat, std::uint64_t n, std::uint64_t seed) {
  check_unit(psi_hat, "psi");
  Rng rng(seed, 8);
  std::vector<OnticSample> out(n);
  for (auto& s : out) {
    auto l = ljbr_sample(psi_hat, rng);
    s.direction = l.lambda_psi;
    s.level = l.level;
  }
  return out;
}

namespace {

using CellKey = std::tuple<int, int, int, int>;

CellKey cell_of(const OnticSample& s, const OverlapGrid& g) {
  int label = s.label.value_or(-1);
  int band = -1, sector = -1, bin = -1;
  if (s.direction) {
    const Vec3& v = *s.direction;
    // z is uniform on [-1, 1] for uniform points on S², so equal z-bands are equal-area.
    band = std::clamp(static_cast<int>((v[2] + 1) / 2 * g.z_bands), 0, g.z_bands - 1);
    double phi = std::atan2(v[1], v[0]) + M_PI;
    sector = std::clamp(static_cast<int>(phi / (2 * M_PI) * g.sectors), 0, g.sectors - 1);
  }
  if (s.level) bin = std::clamp(static_cast<int>(*s.level * g.level_bins), 0, g.level_bins - 1);
  return {label, band, sector, bin};
}

std::map<CellKey, double> occupancy(const std::vector<OnticSample>& v, const OverlapGrid& g) {
  std::map<CellKey, double> m;
  for (const auto& s : v) m[cell_of(s, g)] += 1;
  for (auto& [k, c] : m) c /= static_cast<double>(v.size());
  return m;
}

}  // namespace

OverlapEstimate psi_ontic_overlap(const std::vector<OnticSample>& a, const std::vector<OnticSample>& b,
                                  const OverlapGrid& grid) {
  if (a.empty() || b.empty()) throw DataError("overlap needs samples from both models");
  if (grid.z_bands < 1 || grid.sectors < 1 || grid.level_bins < 1) throw DataError("overlap grid must be positive");
  auto pa = occupancy(a, grid), pb = occupancy(b, grid);
  OverlapEstimate e;
  e.grid = grid;
  e.occupied_a = pa.size();
  e.occupied_b = pb.size();
  for (const auto& [k, p] : pa) {
    auto it = pb.find(k);
    if (it == pb.end()) continue;
    ++e.shared_cells;
    e.overlap += std::min(p, it->second);
  }
  return e;
}

}  // namespace ctx
