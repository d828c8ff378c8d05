#include "ctx/csw.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "ctx/error.hpp"
#include "ctx/linalg.hpp"

namespace ctx {

std::string CswForm::event_label(std::size_t i) const {
  const auto& e = events[i];
  return outcome_string(e.outcome, static_cast<int>(e.context.size())) + "|" + scenario.key(e.context);
}

CswForm to_csw_form(const BooleInequality& ineq) {
  const auto& s = ineq.scenario;
  CswForm f;
  f.scenario = s;
  int terms = 0;
  for (int ci = 0; ci < s.num_contexts(); ++ci) {
    const Rational& c = ineq.h.a[ci];
    if (sgn(c) == 0) continue;
    if (s.contexts()[ci].size() != 2)
      throw DataError("CSW form supports only two-observable contexts; " + s.key(ci) + " has a coefficient");
    if (c != 1 && c != -1) throw DataError("CSW form needs coefficients ±1; " + s.key(ci) + " has " + to_string(c));
    ++terms;
    // +<XY> = 2(p(++) + p(--)) - 1, -<XY> = 2(p(+-) + p(-+)) - 1
    if (c == 1) {
      f.events.push_back({s.contexts()[ci], 0b00});
      f.events.push_back({s.contexts()[ci], 0b11});
    } else {
      f.events.push_back({s.contexts()[ci], 0b01});
      f.events.push_back({s.contexts()[ci], 0b10});
    }
  }
  if (terms == 0) throw DataError("CSW form of an empty inequality");
  f.scale = 2;
  f.offset = terms;
  f.original_bound = ineq.h.b;
  f.nc_bound = (ineq.h.b + terms) / 2;
  return f;
}

bool ExclusivityGraph::has_edge(int u, int v) const {
  if (u > v) std::swap(u, v);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

ExclusivityGraph make_graph(std::vector<std::string> labels, std::vector<std::pair<int, int>> edges) {
  ExclusivityGraph g;
  g.labels = std::move(labels);
  const int n = g.size();
  std::set<std::pair<int, int>> es;
  for (auto [u, v] : edges) {
    if (u == v) throw DataError("graph has a self-loop");
    if (u < 0 || v < 0 || u >= n || v >= n) throw DataError("graph edge references a missing vertex");
    es.insert(std::minmax(u, v));
  }
  g.edges.assign(es.begin(), es.end());
  return g;
}

ExclusivityGraph exclusivity_graph(const CswForm& form) {
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> edges;
  const int n = static_cast<int>(form.events.size());
  for (int i = 0; i < n; ++i) labels.push_back(form.event_label(i));
  auto value = [](const CswEvent& e, int obs) {
    auto it = std::find(e.context.begin(), e.context.end(), obs);
    if (it == e.context.end()) return 0;
    int pos = static_cast<int>(it - e.context.begin());
    int m = static_cast<int>(e.context.size());
    return (e.outcome >> (m - 1 - pos)) & 1u ? -1 : 1;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int obs : form.events[i].context) {
        int a = value(form.events[i], obs), b = value(form.events[j], obs);
        if (b != 0 && a != b) {
          edges.emplace_back(i, j);
          break;
        }
      }
  return make_graph(labels, edges);
}

ExclusivityGraph prism_graph(int n) {
  if (n < 3) throw DataError("prism needs n >= 3");
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 2 * n; ++i) labels.push_back(std::to_string(i));
  for (int i = 0; i < n; ++i) {
    edges.emplace_back(i, (i + 1) % n);
    edges.emplace_back(n + i, n + (i + 1) % n);
    edges.emplace_back(i, n + i);
  }
  return make_graph(labels, edges);
}

ExclusivityGraph mobius_ladder(int n) {
  if (n < 2) throw DataError("Möbius ladder needs n >= 2");
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 2 * n; ++i) labels.push_back(std::to_string(i));
  for (int i = 0; i < 2 * n; ++i) edges.emplace_back(i, (i + 1) % (2 * n));
  for (int i = 0; i < n; ++i) edges.emplace_back(i, i + n);
  return make_graph(labels, edges);
}

namespace {

struct Entry {
  int i, j;
  double v;
};

// Direction S_k of the feasible affine set {tr B = 1, B_uv = 0 on edges}.
using Direction = std::vector<Entry>;

Eigen::MatrixXd assemble(const std::vector<Direction>& dirs, const Eigen::VectorXd& x, int m) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(m, m) / m;
  for (std::size_t k = 0; k < dirs.size(); ++k)
    for (const auto& e : dirs[k]) b(e.i, e.j) += x(k) * e.v;
  return b;
}

double barrier_objective(const Eigen::MatrixXd& b, double mu, bool& ok) {
  Eigen::LLT<Eigen::MatrixXd> llt(b);
  ok = llt.info() == Eigen::Success;
  if (!ok) return 0;
  double logdet = 0;
  for (int i = 0; i < b.rows(); ++i) {
    double d = llt.matrixL()(i, i);
    if (!(d > 0)) {
      ok = false;
      return 0;
    }
    logdet += 2 * std::log(d);
  }
  return b.sum() + mu * logdet;
}

double max_eigenvalue(const Eigen::MatrixXd& a) {
  Eigen::MatrixXd w = a, v;
  jacobi_symmetric(w, v, 1e-14);
  return w.diagonal().maxCoeff();
}

}  // namespace

ThetaResult lovasz_theta(const ExclusivityGraph& g) {
  const int m = g.size();
  if (m == 0) throw DataError("Lovász theta of an empty vertex set");
  if (m > 64) throw DataError("Lovász theta: more than 64 vertices");
  ThetaResult res;
  if (m == 1) {
    res.value = res.upper = 1;
    return res;
  }
  std::vector<Direction> dirs;
  for (int u = 0; u < m; ++u)
    for (int v = u + 1; v < m; ++v)
      if (!g.has_edge(u, v)) dirs.push_back({{u, v, 1.0}, {v, u, 1.0}});
  for (int k = 0; k + 1 < m; ++k) dirs.push_back({{k, k, 1.0}, {m - 1, m - 1, -1.0}});
  const int nv = static_cast<int>(dirs.size());

  Eigen::VectorXd x = Eigen::VectorXd::Zero(nv);
  Eigen::VectorXd jdot(nv);
  for (int k = 0; k < nv; ++k) {
    double s = 0;
    for (const auto& e : dirs[k]) s += e.v;
    jdot(k) = s;
  }
  // The barrier Hessian's condition number grows like 1/mu², so in double
  // precision the gap stalls a little above 1e-8; 1e-7 is accepted.
  double mu = 1.0;
  double best_gap = INFINITY;
  int stalled = 0;
  struct NewtonStep {
    Eigen::MatrixXd w;  // B^{-1}
    Eigen::VectorXd step;
    double decrement = 0;
  };
  auto newton = [&](const Eigen::MatrixXd& b) {
    Eigen::LLT<Eigen::MatrixXd> llt(b);
    if (llt.info() != Eigen::Success) throw SolverError("Lovász theta: iterate left the PSD cone");
    NewtonStep ns;
    ns.w = llt.solve(Eigen::MatrixXd::Identity(m, m));
    ns.w = (ns.w + ns.w.transpose()) / 2;
    const auto& w = ns.w;
    Eigen::VectorXd grad(nv);
    Eigen::MatrixXd hess(nv, nv);
    for (int k = 0; k < nv; ++k) {
      double t = 0;
      for (const auto& e : dirs[k]) t += e.v * w(e.j, e.i);
      grad(k) = jdot(k) + mu * t;
      for (int l = 0; l <= k; ++l) {
        double s = 0;
        for (const auto& a : dirs[k])
          for (const auto& c : dirs[l]) s += a.v * c.v * w(c.j, a.i) * w(a.j, c.i);
        hess(k, l) = hess(l, k) = mu * s;
      }
    }
    ns.step = Eigen::LDLT<Eigen::MatrixXd>(hess).solve(grad);
    ns.decrement = grad.dot(ns.step);
    ++res.newton_steps;
    return ns;
  };

  for (int outer = 0; outer < 200 && mu > 1e-14; ++outer) {
    // Centering on <J,B> + mu log det B. The decrement is measured in the
    // scaled barrier f/mu; below 0.2 full Newton steps converge quadratically.
    NewtonStep ns;
    for (int it = 0; it < 60; ++it) {
      ns = newton(assemble(dirs, x, m));
      const double lambda2 = ns.decrement / mu;
      if (!(lambda2 >= 0) || lambda2 < 1e-16) break;
      double t = lambda2 < 0.2 ? 1.0 : 1.0 / (1.0 + std::sqrt(lambda2));
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls, t /= 2) {
        Eigen::VectorXd xn = x + t * ns.step;
        bool ok = false;
        barrier_objective(assemble(dirs, xn, m), mu, ok);
        if (ok) {
          x = xn;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    ns = newton(assemble(dirs, x, m));
    const Eigen::MatrixXd b = assemble(dirs, x, m);
    // First-order corrected dual slack Z = mu (W - W dB W) with dB the pending
    // Newton step; then y_e = -1 - Z_uv and theta <= lambda_max(J + Σ y_e A_e).
    const Eigen::MatrixXd db = assemble(dirs, ns.step, m) - Eigen::MatrixXd::Identity(m, m) / m;
    const Eigen::MatrixXd z = mu * (ns.w - ns.w * db * ns.w);
    Eigen::MatrixXd dual = Eigen::MatrixXd::Ones(m, m);
    for (auto [u, v] : g.edges) {
      double y = -1 - 0.5 * (z(u, v) + z(v, u));
      dual(u, v) += y;
      dual(v, u) += y;
    }
    const double primal = b.sum();
    const double upper = max_eigenvalue(dual);
    const double gap = upper - primal;
    if (gap < best_gap) {
      best_gap = gap;
      res.value = primal;
      res.upper = upper;
      res.gap = gap;
      stalled = 0;
    } else if (++stalled >= 3) {
      break;
    }
    if (gap <= 1e-8) return res;
    mu /= 4;
  }
  if (res.gap <= 1e-7) return res;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", res.gap);
  throw SolverError(std::string("Lovász theta: no convergence, achieved gap ") + buf);
}


double theta_closed_form(GraphFamily family, int n) {
  const double c = std::cos(M_PI / n);
  if (family == GraphFamily::Prism) {
    if (n < 3 || n % 2 == 0) throw DataError("prism closed form holds for odd n >= 3");
    return 2 * n * c / (1 + c);
  }
  if (n < 4 || n % 2) throw DataError("Möbius closed form holds for even n >= 4");
  return n / 2.0 * (1 + c);
}

bool is_bell_scenario(const MarginalScenario& s) {
  const int k = s.num_observables();
  std::vector<std::vector<int>> adj(k);
  bool any_pair = false;
  for (const auto& c : s.contexts()) {
    if (c.size() > 2) return false;
    if (c.size() == 2) {
      adj[c[0]].push_back(c[1]);
      adj[c[1]].push_back(c[0]);
      any_pair = true;
    }
  }
  if (!any_pair) return false;
  std::vector<int> color(k, -1);
  for (int start = 0; start < k; ++start) {
    if (color[start] >= 0) continue;
    color[start] = 0;
    std::vector<int> stack{start};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : adj[u]) {
        if (color[v] < 0) {
          color[v] = 1 - color[u];
          stack.push_back(v);
        } else if (color[v] == color[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

QuantumMaxResult quantum_max(const BooleInequality& ineq) {
  auto form = to_csw_form(ineq);
  QuantumMaxResult r;
  r.theta = lovasz_theta(exclusivity_graph(form));
  r.value = form.scale.get_d() * r.theta.value - form.offset.get_d();
  r.upper_bound_only = is_bell_scenario(ineq.scenario);
  return r;
}

}  // namespace ctx
