#pragma once
#include <array>
#include <map>
#include <string>
#include <vector>

#include "ctx/linalg.hpp"
#include "ctx/polytope.hpp"
#include "ctx/scenario.hpp"

namespace ctx {

using Vec3 = std::array<double, 3>;

// Validated density operator (PSD to 1e-10, unit trace to 1e-12).
class DensityState {
 public:
  explicit DensityState(const CMatrix& rho);
  static DensityState pure(const CVector& ket);
  const CMatrix& matrix() const { return rho_; }
  int dimension() const { return static_cast<int>(rho_.rows()); }

 private:
  CMatrix rho_;
};

double born(const DensityState& rho, const CMatrix& effect);
bool commute(const CMatrix& a, const CMatrix& b);
bool is_dichotomic(const CMatrix& a, double tol = 1e-10);
bool is_projector(const CMatrix& a, double tol = 1e-10);
double operator_norm(const CMatrix& a);

// A state plus observables keyed by scenario observable name.
struct Realization {
  CMatrix state;
  std::map<std::string, CMatrix> observables;
};

FloatModel realize_model(const MarginalScenario& s, const Realization& r);

// Σ_C coefficient_C · (product of the observables of C in canonical order).
CMatrix inequality_operator(const BooleInequality& ineq, const Realization& r);

double expectation(const CMatrix& state, const CMatrix& op);

struct StateIndependenceReport {
  double min_eigenvalue = 0;
  double max_eigenvalue = 0;
  double nc_bound = 0;
  bool state_independent = false;  // min eigenvalue above the bound
  double identity_coefficient = 0;  // tr / d
  double max_deviation = 0;         // max |Î - c·1| entry
  bool proportional_to_identity = false;
};

StateIndependenceReport state_independence_report(const BooleInequality& ineq, const Realization& r);

// ½(1 + cos(n arccos(φ̂·ψ̂))) for odd n.
double gleason_counterexample(int n, const Vec3& psi_hat, const Vec3& phi_hat);

Vec3 bloch_from_angles(double theta, double phi);
CMatrix bloch_projector(const Vec3& v);  // ½(1 + v·σ)
Vec3 bloch_of_pure(const CMatrix& rho);

}  // namespace ctx
