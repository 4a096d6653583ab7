#include "mimolfb/linalg.hpp"

namespace mimolfb {

RealMatrix realify(const ComplexMatrix& m) {
  const Eigen::Index r = m.rows(), c = m.cols();
  RealMatrix out(2 * r, 2 * c);
  out.topLeftCorner(r, c) = m.real();
  out.topRightCorner(r, c) = -m.imag();
  out.bottomLeftCorner(r, c) = m.imag();
  out.bottomRightCorner(r, c) = m.real();
  return out;
}

RealVector realify(const ComplexVector& v) {
  const Eigen::Index n = v.size();
  RealVector out(2 * n);
  out.head(n) = v.real();
  out.tail(n) = v.imag();
  return out;
}

ComplexVector unrealify(const RealVector& v) {
  const Eigen::Index n = v.size() / 2;
  ComplexVector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = {v(i), v(i + n)};
  return out;
}

double unitarity_defect(const ComplexMatrix& a) {
  const ComplexMatrix g = a.adjoint() * a;
  const Eigen::Index n = g.rows();
  return (g - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

bool is_unitary(const ComplexMatrix& a, double tol) {
  return a.rows() == a.cols() && unitarity_defect(a) < tol;
}

}  // namespace mimolfb
