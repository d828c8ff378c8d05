#include "ctx/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ctx/error.hpp"

namespace ctx {

void jacobi_symmetric(Eigen::MatrixXd& a, Eigen::MatrixXd& v, double tol) {
  const int n = static_cast<int>(a.rows());
  v = Eigen::MatrixXd::Identity(n, n);
  const double scale = std::max(a.norm(), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(2 * off) <= tol * scale) return;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        double theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  throw SolverError("Jacobi eigensolver did not converge in 100 sweeps");
}

EigenSystem hermitian_eigen(const CMatrix& a, double tol) {
  const int d = static_cast<int>(a.rows());
  if (a.cols() != d) throw DataError("eigen: matrix not square");
  Eigen::MatrixXd r(2 * d, 2 * d);
  r.topLeftCorner(d, d) = a.real();
  r.topRightCorner(d, d) = -a.imag();
  r.bottomLeftCorner(d, d) = a.imag();
  r.bottomRightCorner(d, d) = a.real();
  r = (r + r.transpose()) / 2;
  Eigen::MatrixXd v;
  jacobi_symmetric(r, v, tol);
  std::vector<int> order(2 * d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return r(x, x) < r(y, y); });

  // Embedded eigenvalues come in equal pairs. Within each cluster of equal
  // values, complex eigenvectors are recovered by pivoted Gram-Schmidt.
  EigenSystem es;
  es.vectors = CMatrix::Zero(d, d);
  for (int k = 0; k < 2 * d; k += 2)
    es.values.push_back((r(order[k], order[k]) + r(order[k + 1], order[k + 1])) / 2);
  const double cluster_tol = 1e-9 * std::max(1.0, std::abs(r(order.back(), order.back())) +
                                                      std::abs(r(order.front(), order.front())));
  int filled = 0;
  for (int start = 0; start < 2 * d;) {
    int stop = start + 2;
    while (stop < 2 * d && r(order[stop], order[stop]) - r(order[stop - 1], order[stop - 1]) <= cluster_tol)
      stop += 2;
    std::vector<CVector> cand;
    for (int k = start; k < stop; ++k) {
      const auto col = v.col(order[k]);
      CVector u(d);
      for (int i = 0; i < d; ++i) u(i) = Complex(col(i), col(d + i));
      cand.push_back(u);
    }
    for (int need = (stop - start) / 2; need > 0; --need) {
      int best = -1;
      double best_norm = 0;
      CVector best_vec;
      for (std::size_t c = 0; c < cand.size(); ++c) {
        CVector u = cand[c];
        for (int j = 0; j < filled; ++j) u -= es.vectors.col(j).dot(u) * es.vectors.col(j);
        if (u.norm() > best_norm) {
          best_norm = u.norm();
          best = static_cast<int>(c);
          best_vec = u;
        }
      }
      if (best < 0 || best_norm < 1e-6) throw SolverError("eigen: failed to recover complex eigenvectors");
      es.vectors.col(filled++) = best_vec.normalized();
    }
    start = stop;
  }
  return es;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix identity(int d) { return CMatrix::Identity(d, d); }

CMatrix projector(const CVector& k) {
  CVector u = k.normalized();
  return u * u.adjoint();
}

CVector ket(std::initializer_list<Complex> entries) {
  CVector v(static_cast<int>(entries.size()));
  int i = 0;
  for (auto e : entries) v(i++) = e;
  return v;
}

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

bool is_hermitian(const CMatrix& a, double tol) {
  return a.rows() == a.cols() && max_abs(a - a.adjoint()) <= tol;
}

double max_abs(const CMatrix& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace ctx
