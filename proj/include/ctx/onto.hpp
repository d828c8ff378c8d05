#pragma once
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ctx/linalg.hpp"
#include "ctx/quantum.hpp"

namespace ctx {

// mt19937_64 seeded through splitmix64 of (seed, stream); independent streams
// for independent samplers.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64+splitmix64";
  Rng(std::uint64_t seed, std::uint64_t stream = 0);
  double uniform();  // [0, 1), 53 bits
  Vec3 sphere();     // uniform on S²
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

struct QueryResult {
  std::string name;
  double estimate = 0;
  double target = 0;
  double std_error = 0;
  double z = 0;
};

struct SimulationReport {
  std::string model;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::string rng = Rng::kAlgorithm;
  std::vector<QueryResult> queries;

  double max_abs_z() const;
};

// Probability query: se = sqrt(p̂(1-p̂)/N), falling back to the target's
// binomial error when p̂ is 0 or 1.
QueryResult probability_query(std::string name, std::uint64_t hits, std::uint64_t n, double target);

void check_unit(const Vec3& v, const char* what);

// Ontic state; which fields are set depends on the model.
struct OnticSample {
  std::optional<int> label;       // discrete pure-state label
  std::optional<Vec3> direction;  // point on S²
  std::optional<double> level;    // real coordinate in [0, 1]
};

// Kochen–Specker qubit model: Λ = S².
Vec3 ks_sample(const Vec3& psi_hat, Rng& rng);
int ks_response(const Vec3& phi_hat, const Vec3& lambda);
SimulationReport ks_model(const Vec3& psi_hat, const Vec3& phi_hat, std::uint64_t n, std::uint64_t seed);

// Bell model: Λ = PH × [0,1]; λ_ψ = ψ always, λ uniform.
void validate_pvm(const std::vector<CMatrix>& pvm, int dim);
std::vector<double> pvm_probabilities(const CVector& psi, const std::vector<CMatrix>& pvm);
int bell_indicator(const std::vector<double>& probs, int k, double lambda);
int bell_response(const std::vector<double>& probs, double lambda);
SimulationReport bell_qubit_model(const CVector& psi, const CMatrix& pi0, const CMatrix& pi1, std::uint64_t n,
                                  std::uint64_t seed);
SimulationReport bell_general_model(const CVector& psi, const std::vector<CMatrix>& pvm, std::uint64_t n,
                                    std::uint64_t seed);

// Bell–Mermin qubit model for A = a0·1 + a·σ.
struct QubitObservable {
  double a0 = 0;
  Vec3 a{0, 0, 0};
};
QubitObservable qubit_observable(const CMatrix& a);
CMatrix qubit_matrix(const QubitObservable& a);
double bell_mermin_response(const QubitObservable& a, const Vec3& psi_hat, const Vec3& lambda);
SimulationReport bell_mermin_model(const Vec3& psi_hat, const QubitObservable& a, std::uint64_t n,
                                   std::uint64_t seed);

struct AdditivityWitness {
  Vec3 psi_hat;
  Vec3 lambda;
  double joint = 0;  // ξ_{A+B}
  double sum = 0;    // ξ_A + ξ_B
};

struct AdditivityReport {
  std::uint64_t points = 0;
  std::uint64_t violations = 0;
  bool additive = true;
  std::optional<AdditivityWitness> witness;  // first violating point
};

AdditivityReport bell_mermin_additivity_check(const QubitObservable& a, const QubitObservable& b,
                                              std::uint64_t points, std::uint64_t seed);

// Lewis–Jennings–Barrett–Rudolph qubit model. Λ = S² × [0,1].
double polar_angle(const Vec3& v);
double ljbr_f(const Vec3& psi_hat);  // ½(1 + cos(θ_ψ + π/2))
bool in_north(const Vec3& v);
struct LjbrSample {
  Vec3 lambda_psi;
  double level = 0;
  bool overlap_branch = false;  // drawn from U_{Λ_N}
};
LjbrSample ljbr_sample(const Vec3& psi_hat, Rng& rng);
int ljbr_response(const Vec3& phi0_hat, const LjbrSample& s);
// phi_hat may be either element; the model relabels so θ_{φ0} <= θ_{φ1}.
SimulationReport ljbr_qubit_model(const Vec3& psi_hat, const Vec3& phi_hat, std::uint64_t n, std::uint64_t seed);

// Ontic samples for the overlap estimate.
std::vector<OnticSample> ks_ontic_samples(const Vec3& psi_hat, std::uint64_t n, std::uint64_t seed);
std::vector<OnticSample> bell_ontic_samples(const Vec3& psi_hat, std::uint64_t n, std::uint64_t seed);
std::vector<OnticSample> ljbr_ontic_samples(const Vec3& psi_hat, std::uint64_t n, std::uint64_t seed);

// Equal-area cells on S² (uniform z-bands times azimuth sectors) times
// uniform bins in the real coordinate.
struct OverlapGrid {
  int z_bands = 100;
  int sectors = 100;
  int level_bins = 100;
};

struct OverlapEstimate {
  double overlap = 0;  // Σ_cells min(p̂_A, p̂_B)
  std::uint64_t occupied_a = 0;
  std::uint64_t occupied_b = 0;
  std::uint64_t shared_cells = 0;
  OverlapGrid grid;
};

OverlapEstimate psi_ontic_overlap(const std::vector<OnticSample>& a, const std::vector<OnticSample>& b,
                                  const OverlapGrid& grid = {});

}  // namespace ctx
