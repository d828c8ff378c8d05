#include "ctx/lp.hpp"

#include "ctx/error.hpp"

namespace ctx {

namespace {

class Tableau {
 public:
  Tableau(const std::vector<LinearRow>& rows, std::size_t n) : n_(n), m_(rows.size()) {
    negated_.assign(m_, false);
    std::vector<Sense> sense(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      sense[r] = rows[r].sense;
      bool flip = sgn(rows[r].b) < 0 || (sense[r] == Sense::GreaterEq && sgn(rows[r].b) == 0);
      if (flip) {
        negated_[r] = true;
        if (sense[r] == Sense::LessEq)
          sense[r] = Sense::GreaterEq;
        else if (sense[r] == Sense::GreaterEq)
          sense[r] = Sense::LessEq;
      }
    }
    std::size_t slack = 0, art = 0;
    for (std::size_t r = 0; r < m_; ++r) {
      if (sense[r] != Sense::Equal) ++slack;
      if (sense[r] != Sense::LessEq) ++art;
    }
    slack0_ = n_;
    art0_ = slack0_ + slack;
    shadow0_ = art0_ + art;
    rhs_ = shadow0_ + m_;
    t_.assign(m_, std::vector<Rational>(rhs_ + 1));
    basis_.assign(m_, 0);
    std::size_t s = slack0_, a = art0_;
    for (std::size_t r = 0; r < m_; ++r) {
      if (rows[r].a.size() != n_) throw DataError("LP row has wrong length");
      const int f = negated_[r] ? -1 : 1;
      for (std::size_t j = 0; j < n_; ++j) t_[r][j] = f * rows[r].a[j];
      t_[r][rhs_] = f * rows[r].b;
      t_[r][shadow0_ + r] = 1;
      if (sense[r] == Sense::LessEq) {
        t_[r][s] = 1;
        basis_[r] = s++;
      } else if (sense[r] == Sense::GreaterEq) {
        t_[r][s++] = -1;
        t_[r][a] = 1;
        basis_[r] = a++;
      } else {
        t_[r][a] = 1;
        basis_[r] = a++;
      }
    }
  }

  // Maximizes cost·x over the allowed columns; returns false if unbounded.
  bool optimize(const std::vector<Rational>& cost, std::size_t allowed_end) {
    z_.assign(rhs_ + 1, Rational(0));
    for (std::size_t j = 0; j < shadow0_; ++j) z_[j] = cost[j];
    for (std::size_t r = 0; r < m_; ++r) {
      const Rational& cb = cost[basis_[r]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j <= rhs_; ++j)
        if (sgn(t_[r][j]) != 0) z_[j] -= cb * t_[r][j];
    }
    for (;;) {
      std::size_t enter = allowed_end;
      for (std::size_t j = 0; j < allowed_end; ++j)
        if (sgn(z_[j]) > 0) {
          enter = j;
          break;
        }
      if (enter == allowed_end) return true;
      std::size_t leave = m_;
      Rational best;
      for (std::size_t r = 0; r < m_; ++r) {
        if (sgn(t_[r][enter]) <= 0) continue;
        Rational ratio = t_[r][rhs_] / t_[r][enter];
        if (leave == m_ || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t j) {
    Rational p = t_[r][j];
    for (auto& v : t_[r]) v /= p;
    for (std::size_t k = 0; k < m_; ++k) {
      if (k == r || sgn(t_[k][j]) == 0) continue;
      Rational f = t_[k][j];
      for (std::size_t c = 0; c <= rhs_; ++c)
        if (sgn(t_[r][c]) != 0) t_[k][c] -= f * t_[r][c];
    }
    if (sgn(z_[j]) != 0) {
      Rational f = z_[j];
      for (std::size_t c = 0; c <= rhs_; ++c)
        if (sgn(t_[r][c]) != 0) z_[c] -= f * t_[r][c];
    }
    basis_[r] = j;
  }

  // Pushes zero-valued artificials out of the basis where a real column can replace them.
  void expel_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < art0_ || basis_[r] >= shadow0_) continue;
      for (std::size_t j = 0; j < art0_; ++j)
        if (sgn(t_[r][j]) != 0) {
          pivot(r, j);
          break;
        }
    }
  }

  std::vector<Rational> duals(const std::vector<Rational>& cost) const {
    std::vector<Rational> y(m_);
    for (std::size_t r = 0; r < m_; ++r)
      for (std::size_t k = 0; k < m_; ++k) y[r] += cost[basis_[k]] * t_[k][shadow0_ + r];
    for (std::size_t r = 0; r < m_; ++r)
      if (negated_[r]) y[r] = -y[r];
    return y;
  }

  std::vector<Rational> primal() const {
    std::vector<Rational> x(n_);
    for (std::size_t r = 0; r < m_; ++r)
      if (basis_[r] < n_) x[basis_[r]] = t_[r][rhs_];
    return x;
  }

  Rational objective(const std::vector<Rational>& cost) const {
    Rational v;
    for (std::size_t r = 0; r < m_; ++r) v += cost[basis_[r]] * t_[r][rhs_];
    return v;
  }

  std::size_t art0() const { return art0_; }
  std::size_t shadow0() const { return shadow0_; }
  std::size_t width() const { return rhs_ + 1; }

 private:
  std::size_t n_, m_;
  std::size_t slack0_ = 0, art0_ = 0, shadow0_ = 0, rhs_ = 0;
  std::vector<std::vector<Rational>> t_;
  std::vector<Rational> z_;
  std::vector<std::size_t> basis_;
  std::vector<bool> negated_;
};

}  // namespace

LpResult lp_maximize(const std::vector<LinearRow>& rows, const std::vector<Rational>& c) {
  const std::size_t n = c.size();
  Tableau tab(rows, n);
  LpResult res;

  std::vector<Rational> phase1(tab.width());
  for (std::size_t j = tab.art0(); j < tab.shadow0(); ++j) phase1[j] = -1;
  tab.optimize(phase1, tab.shadow0());
  if (sgn(tab.objective(phase1)) < 0) {
    res.status = LpStatus::Infeasible;
    res.y = tab.duals(phase1);
    for (auto& v : res.y) v = -v;
    return res;
  }
  tab.expel_artificials();

  std::vector<Rational> cost(tab.width());
  for (std::size_t j = 0; j < n; ++j) cost[j] = c[j];
  if (!tab.optimize(cost, tab.art0())) {
    res.status = LpStatus::Unbounded;
    res.x = tab.primal();
    return res;
  }
  res.status = LpStatus::Optimal;
  res.x = tab.primal();
  res.value = tab.objective(cost);
  res.y = tab.duals(cost);
  return res;
}

FeasibilityResult lp_feasibility(const std::vector<LinearRow>& rows, std::size_t num_vars) {
  LpResult r = lp_maximize(rows, std::vector<Rational>(num_vars));
  FeasibilityResult f;
  f.feasible = r.status != LpStatus::Infeasible;
  if (f.feasible)
    f.x = r.x;
  else
    f.farkas = r.y;
  return f;
}

FeasibilityResult lp_feasibility(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b) {
  if (A.size() != b.size()) throw DataError("LP: row count mismatch");
  std::vector<LinearRow> rows;
  std::size_t n = A.empty() ? 0 : A[0].size();
  for (std::size_t i = 0; i < A.size(); ++i) rows.push_back({A[i], Sense::Equal, b[i]});
  return lp_feasibility(rows, n);
}

bool check_farkas(const std::vector<LinearRow>& rows, std::size_t num_vars, const std::vector<Rational>& y) {
  if (y.size() != rows.size()) return false;
  Rational yb;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].sense == Sense::GreaterEq && sgn(y[i]) < 0) return false;
    if (rows[i].sense == Sense::LessEq && sgn(y[i]) > 0) return false;
    yb += y[i] * rows[i].b;
  }
  if (sgn(yb) <= 0) return false;
  for (std::size_t j = 0; j < num_vars; ++j) {
    Rational s;
    for (std::size_t i = 0; i < rows.size(); ++i) s += y[i] * rows[i].a[j];
    if (sgn(s) > 0) return false;
  }
  return true;
}

int exact_rank(std::vector<std::vector<Rational>> m) {
  if (m.empty()) return 0;
  const std::size_t cols = m[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && sgn(m[piv][c]) == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      if (sgn(m[r][c]) == 0) continue;
      Rational f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

}  // namespace ctx
