#include "ctx/quantum.hpp"

#include <algorithm>
#include <cmath>

#include "ctx/error.hpp"

namespace ctx {

DensityState::DensityState(const CMatrix& rho) : rho_(rho) {
  if (!is_hermitian(rho)) throw DataError("density operator is not Hermitian");
  if (std::abs(rho.trace() - Complex(1, 0)) > 1e-12) throw DataError("density operator does not have unit trace");
  if (hermitian_eigen(rho).values.front() < -1e-10) throw DataError("density operator is not positive semidefinite");
}

DensityState DensityState::pure(const CVector& k) { return DensityState(projector(k)); }

double born(const DensityState& rho, const CMatrix& effect) {
  if (effect.rows() != rho.dimension()) throw DataError("born: dimension mismatch");
  if (!is_hermitian(effect)) throw DataError("born: effect is not Hermitian");
  auto ev = hermitian_eigen(effect).values;
  if (ev.front() < -1e-10 || ev.back() > 1 + 1e-10) throw DataError("born: effect outside [0, 1]");
  double p = (rho.matrix() * effect).trace().real();
  if (p < 0 && p >= -1e-12) p = 0;
  if (p > 1 && p <= 1 + 1e-12) p = 1;
  return p;
}

bool commute(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DataError("commute: dimension mismatch");
  return (a * b - b * a).norm() <= 1e-10;
}

bool is_dichotomic(const CMatrix& a, double tol) {
  return is_hermitian(a, tol) && max_abs(a * a - identity(static_cast<int>(a.rows()))) <= tol;
}

bool is_projector(const CMatrix& a, double tol) { return is_hermitian(a, tol) && max_abs(a * a - a) <= tol; }

double operator_norm(const CMatrix& a) {
  if (!is_hermitian(a, 1e-10)) throw DataError("operator_norm: matrix is not Hermitian");
  auto ev = hermitian_eigen(a).values;
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

double expectation(const CMatrix& state, const CMatrix& op) { return (state * op).trace().real(); }

namespace {

const CMatrix& lookup(const Realization& r, const std::string& name) {
  auto it = r.observables.find(name);
  if (it == r.observables.end()) throw DataError("realization has no observable '" + name + "'");
  if (it->second.rows() != r.state.rows()) throw DataError("observable '" + name + "' has the wrong dimension");
  return it->second;
}

void require_commuting(const MarginalScenario& s, const Context& c, const Realization& r) {
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if (!commute(lookup(r, s.observables()[c[i]]), lookup(r, s.observables()[c[j]])))
        throw DataError("observables " + s.observables()[c[i]] + " and " + s.observables()[c[j]] +
                        " in a context do not commute");
}

}  // namespace

FloatModel realize_model(const MarginalScenario& s, const Realization& r) {
  DensityState rho(r.state);
  const int d = rho.dimension();
  for (const auto& name : s.observables())
    if (!is_dichotomic(lookup(r, name))) throw DataError("observable '" + name + "' is not dichotomic");
  std::map<Context, Table<double>> given;
  for (int ci = 0; ci < s.num_contexts(); ++ci) {
    if (!s.is_maximal(ci)) continue;
    const Context& c = s.contexts()[ci];
    require_commuting(s, c, r);
    const int m = static_cast<int>(c.size());
    Table<double> t(std::size_t{1} << m);
    for (std::uint32_t o = 0; o < t.size(); ++o) {
      CMatrix p = identity(d);
      for (int b = 0; b < m; ++b) {
        const double sign = (o >> (m - 1 - b)) & 1u ? -1.0 : 1.0;
        p = p * ((identity(d) + sign * lookup(r, s.observables()[c[b]])) / 2.0);
      }
      t[o] = (rho.matrix() * p).trace().real();
    }
    given[c] = t;
  }
  return FloatModel(s, given);
}

CMatrix inequality_operator(const BooleInequality& ineq, const Realization& r) {
  const auto& s = ineq.scenario;
  const int d = static_cast<int>(r.state.rows());
  CMatrix total = CMatrix::Zero(d, d);
  for (int ci = 0; ci < s.num_contexts(); ++ci) {
    if (sgn(ineq.h.a[ci]) == 0) continue;
    const Context& c = s.contexts()[ci];
    require_commuting(s, c, r);
    CMatrix p = identity(d);
    for (int i : c) p = p * lookup(r, s.observables()[i]);
    total += ineq.h.a[ci].get_d() * p;
  }
  return total;
}

StateIndependenceReport state_independence_report(const BooleInequality& ineq, const Realization& r) {
  CMatrix op = inequality_operator(ineq, r);
  auto ev = hermitian_eigen(op).values;
  StateIndependenceReport rep;
  const int d = static_cast<int>(op.rows());
  rep.min_eigenvalue = ev.front();
  rep.max_eigenvalue = ev.back();
  rep.nc_bound = ineq.h.b.get_d();
  rep.state_independent = rep.min_eigenvalue > rep.nc_bound;
  rep.identity_coefficient = op.trace().real() / d;
  rep.max_deviation = max_abs(op - rep.identity_coefficient * identity(d));
  rep.proportional_to_identity = rep.max_deviation <= 1e-10;
  return rep;
}

double gleason_counterexample(int n, const Vec3& psi, const Vec3& phi) {
  if (n < 1 || n % 2 == 0) throw DataError("gleason_counterexample needs odd n >= 1");
  for (const auto* v : {&psi, &phi}) {
    double norm = std::sqrt((*v)[0] * (*v)[0] + (*v)[1] * (*v)[1] + (*v)[2] * (*v)[2]);
    if (std::abs(norm - 1) > 1e-12) throw DataError("gleason_counterexample needs unit Bloch vectors");
  }
  double x = psi[0] * phi[0] + psi[1] * phi[1] + psi[2] * phi[2];
  x = std::clamp(x, -1.0, 1.0);
  // cos(n arccos x) is the Chebyshev polynomial T_n(x); the recurrence keeps
  // T_n(-x) = -T_n(x) bit-exact for odd n.
  double prev = 1, cur = x;
  for (int k = 1; k < n; ++k) {
    double next = 2 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  // Evaluate the half with t >= 0 and reflect: w + (1 - w) == 1 exactly for
  // w in [1/2, 1], so value(φ) + value(-φ) sums to one without rounding.
  const double w = 0.5 + 0.5 * std::abs(cur);
  return cur >= 0 ? w : 1 - w;
}

Vec3 bloch_from_angles(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

CMatrix bloch_projector(const Vec3& v) {
  return (identity(2) + v[0] * pauli_x() + v[1] * pauli_y() + v[2] * pauli_z()) / 2.0;
}

Vec3 bloch_of_pure(const CMatrix& rho) {
  if (rho.rows() != 2) throw DataError("Bloch vector requested for a non-qubit state");
  return {(rho * pauli_x()).trace().real(), (rho * pauli_y()).trace().real(), (rho * pauli_z()).trace().real()};
}

}  // namespace ctx
