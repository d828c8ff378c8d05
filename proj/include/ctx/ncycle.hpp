#pragma once
#include <string>
#include <vector>

#include "ctx/polytope.hpp"
#include "ctx/quantum.hpp"

namespace ctx {

using SignVector = std::vector<int>;

// Observable names X0..X{n-1}; zero padded when n > 10 so that name order
// and index order agree.
std::string ncycle_name(int n, int i);
MarginalScenario ncycle_scenario(int n);

// Index in the scenario of the pair {X_i, X_{i+1 mod n}}.
int ncycle_pair_index(const MarginalScenario& s, int n, int i);

struct NCycleInequality {
  unsigned label;  // bit i set iff gamma_i = -1
  SignVector gamma;
  BooleInequality inequality;
};

// Σ gamma_i <X_i X_{i+1}> <= n - 2.
BooleInequality ncycle_inequality(int n, const SignVector& gamma);
std::vector<NCycleInequality> boole_inequalities(int n);

PolytopeV nd_vertices(int n);
// Positivity of the pair tables: the no-disturbance polytope's H-representation.
std::vector<Halfspace> nd_halfspaces(int n);

double quantum_bound_closed_form(int n);

struct NCycleRealization {
  int n = 0;
  CMatrix state;
  std::vector<CMatrix> observables;
  SignVector target;

  Realization as_realization() const;
};

NCycleRealization quantum_realization(int n);

}  // namespace ctx
