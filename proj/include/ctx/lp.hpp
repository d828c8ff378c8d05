#pragma once
#include <vector>

#include "ctx/rational.hpp"

namespace ctx {

enum class Sense { LessEq, Equal, GreaterEq };

// One row a·x (sense) b over variables x >= 0.
struct LinearRow {
  std::vector<Rational> a;
  Sense sense = Sense::Equal;
  Rational b;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  std::vector<Rational> x;
  // Optimal: dual prices y with value = y·b.
  // Infeasible: Farkas vector y with yᵀA <= 0 and y·b > 0, y_i >= 0 on >= rows,
  // y_i <= 0 on <= rows, free on equalities.
  std::vector<Rational> y;
};

// Dense two-phase tableau simplex with Bland's rule; maximizes c·x.
LpResult lp_maximize(const std::vector<LinearRow>& rows, const std::vector<Rational>& c);

struct FeasibilityResult {
  bool feasible = false;
  std::vector<Rational> x;       // feasible point
  std::vector<Rational> farkas;  // certificate when infeasible
};

FeasibilityResult lp_feasibility(const std::vector<LinearRow>& rows, std::size_t num_vars);

// Convenience for {A x = b, x >= 0}.
FeasibilityResult lp_feasibility(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b);

// True iff y certifies infeasibility of `rows` in the orientation above.
bool check_farkas(const std::vector<LinearRow>& rows, std::size_t num_vars, const std::vector<Rational>& y);

int exact_rank(std::vector<std::vector<Rational>> m);

}  // namespace ctx
