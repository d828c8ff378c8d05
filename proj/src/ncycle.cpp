#include "ctx/ncycle.hpp"

#include <algorithm>
#include <cmath>

#include "ctx/error.hpp"

namespace ctx {

namespace {

void check_range(int n) {
  if (n < 2 || n > 16) throw DataError("n-cycle size must lie in 2..16");
}

}  // namespace

std::string ncycle_name(int n, int i) {
  std::string digits = std::to_string(i);
  if (n > 10 && digits.size() < 2) digits = "0" + digits;
  return "X" + digits;
}

MarginalScenario ncycle_scenario(int n) {
  check_range(n);
  std::vector<std::vector<std::string>> ctxs;
  for (int i = 0; i < n; ++i) {
    if (n == 2 && i == 1) break;
    ctxs.push_back({ncycle_name(n, i), ncycle_name(n, (i + 1) % n)});
  }
  return validate_scenario(ctxs);
}

int ncycle_pair_index(const MarginalScenario& s, int n, int i) {
  Context c{s.observable_index(ncycle_name(n, i)), s.observable_index(ncycle_name(n, (i + 1) % n))};
  std::sort(c.begin(), c.end());
  return s.context_index(c);
}

BooleInequality ncycle_inequality(int n, const SignVector& gamma) {
  if (n < 3) throw DataError("n-cycle inequalities need n >= 3");
  if (static_cast<int>(gamma.size()) != n) throw DataError("sign vector has the wrong length");
  auto s = ncycle_scenario(n);
  Halfspace h{RVector(s.num_contexts()), Rational(n - 2)};
  for (int i = 0; i < n; ++i) {
    if (gamma[i] != 1 && gamma[i] != -1) throw DataError("sign vector entries must be ±1");
    h.a[ncycle_pair_index(s, n, i)] = gamma[i];
  }
  return {s, h};
}

std::vector<NCycleInequality> boole_inequalities(int n) {
  if (n < 3) throw DataError("n-cycle inequalities need n >= 3");
  check_range(n);
  std::vector<NCycleInequality> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) % 2 == 0) continue;
    SignVector g(n);
    for (int i = 0; i < n; ++i) g[i] = (mask >> i) & 1u ? -1 : 1;
    out.push_back({mask, g, ncycle_inequality(n, g)});
  }
  return out;
}

PolytopeV nd_vertices(int n) {
  if (n < 3) throw DataError("no-disturbance vertices need n >= 3");
  auto s = ncycle_scenario(n);
  PolytopeV p = nc_vertices(s);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) % 2 == 0) continue;
    RVector v(s.num_contexts());
    for (int i = 0; i < n; ++i) v[ncycle_pair_index(s, n, i)] = (mask >> i) & 1u ? -1 : 1;
    p.vertices.push_back(std::move(v));
  }
  return p;
}

std::vector<Halfspace> nd_halfspaces(int n) { return positivity_inequalities(ncycle_scenario(n), true); }

double quantum_bound_closed_form(int n) {
  if (n < 2) throw DataError("quantum bound needs n >= 2");
  const double c = std::cos(M_PI / n);
  if (n % 2) return n * (4 * c / (1 + c) - 1);
  return n * c;
}

Realization NCycleRealization::as_realization() const {
  Realization r;
  r.state = state;
  for (int i = 0; i < n; ++i) r.observables[ncycle_name(n, i)] = observables[i];
  return r;
}

NCycleRealization quantum_realization(int n) {
  if (n < 3) throw DataError("quantum realization needs n >= 3");
  check_range(n);
  NCycleRealization r;
  r.n = n;
  const double c = std::cos(M_PI / n);
  if (n % 2) {
    const double cos_t = std::sqrt(c / (1 + c));
    const double sin_t = std::sqrt(1 - cos_t * cos_t);
    r.state = projector(ket({1, 0, 0}));
    for (int k = 0; k < n; ++k) {
      const double phik = (n - 1) * M_PI * k / n;
      CVector v = ket({cos_t, sin_t * std::cos(phik), sin_t * std::sin(phik)});
      if (std::abs(v.norm() - 1) > 1e-12) throw SolverError("odd-cycle vector is not unit");
      r.observables.push_back(2.0 * projector(v) - identity(3));
    }
    r.target.assign(n, -1);
  } else {
    const CVector psi_minus = ket({0, 1, -1, 0}) / std::sqrt(2.0);
    r.state = projector(psi_minus);
    for (int k = 0; k < n; ++k) {
      CMatrix x = std::cos(k * M_PI / n) * pauli_x() + std::sin(k * M_PI / n) * pauli_z();
      r.observables.push_back(k % 2 == 0 ? kron(x, identity(2)) : kron(identity(2), x));
    }
    r.target.assign(n, -1);
    r.target[n - 1] = 1;
  }
  for (int k = 0; k < n; ++k) {
    if (!is_dichotomic(r.observables[k])) throw SolverError("n-cycle observable is not dichotomic");
    if (!commute(r.observables[k], r.observables[(k + 1) % n]))
      throw SolverError("adjacent n-cycle observables do not commute");
  }
  return r;
}

}  // namespace ctx
