#pragma once

#include <Eigen/Dense>
#include <complex>

namespace mimolfb {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;

// Equivalent real-valued model of a complex linear map:
//
//   realify(M) = [ Re(M)  -Im(M) ]
//                [ Im(M)   Re(M) ]
//
// so that realify(M) * realify(x) == realify(M x) and norms are preserved.
RealMatrix realify(const ComplexMatrix& m);

// Stacks [Re(v); Im(v)].
RealVector realify(const ComplexVector& v);

// Inverse of realify() on vectors: first half real parts, second half
// imaginary parts.
ComplexVector unrealify(const RealVector& v);

// max |(A^H A - I)_{ij}|, zero for a unitary matrix.
double unitarity_defect(const ComplexMatrix& a);

bool is_unitary(const ComplexMatrix& a, double tol = 1e-9);

}  // namespace mimolfb
