#pragma once
#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace ctx {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct EigenSystem {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // column k belongs to values[k]
};

// Cyclic Jacobi on the real 2d x 2d embedding [[Re, -Im], [Im, Re]]; each
// eigenvalue appears twice there, so every other one is kept.
EigenSystem hermitian_eigen(const CMatrix& a, double tol = 1e-13);

// Symmetric real Jacobi; sweeps until the off-diagonal norm drops below tol * ||A||_F.
void jacobi_symmetric(Eigen::MatrixXd& a, Eigen::MatrixXd& v, double tol);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix identity(int d);
CMatrix projector(const CVector& ket);  // normalizes
CVector ket(std::initializer_list<Complex> entries);

CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

bool is_hermitian(const CMatrix& a, double tol = 1e-12);
double max_abs(const CMatrix& a);

}  // namespace ctx
