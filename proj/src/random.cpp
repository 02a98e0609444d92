#include "blockpos/random.hpp"

#include <algorithm>

namespace blockpos {

ComplexMatrix RandomSource::complex_gaussian(Index rows, Index cols) {
  ComplexMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal();
      const double im = normal();
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

HermitianMatrix RandomSource::hermitian(Index n) {
  return HermitianMatrix(complex_gaussian(n, n));
}

ComplexMatrix RandomSource::unitary(Index n) {
  Eigen::HouseholderQR<ComplexMatrix> qr(complex_gaussian(n, n));
  ComplexMatrix q = qr.householderQ();
  // Fix the phases so the distribution does not depend on the QR convention.
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

ComplexMatrix RandomSource::with_singular_values(Index rows, Index cols, const RealVector& s) {
  const Index k = std::min<Index>(s.size(), std::min(rows, cols));
  const ComplexMatrix u = unitary(rows);
  const ComplexMatrix v = unitary(cols);
  ComplexMatrix out = ComplexMatrix::Zero(rows, cols);
  for (Index i = 0; i < k; ++i) out += s(i) * u.col(i) * v.col(i).adjoint();
  return out;
}

}  // namespace blockpos
