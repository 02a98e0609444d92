#include "blockpos/parallel_sum.hpp"

#include <algorithm>
#include <sstream>

#include "blockpos/douglas.hpp"

namespace blockpos::parallel {

namespace {

void require_psd_pair(const HermitianMatrix& a, const HermitianMatrix& b, const Tolerances& tol) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "A and B must share a size");
  if (!is_psd(a, tol)) throw Error(ErrorCode::NotPSD, "A is not PSD");
  if (!is_psd(b, tol)) throw Error(ErrorCode::NotPSD, "B is not PSD");
}

}  // namespace

bool range_sum_sqrt_identity(const HermitianMatrix& a, const HermitianMatrix& b, const Tolerances& tol) {
  require_psd_pair(a, b, tol);
  const HermitianMatrix lhs = range_sum_projector(psd_sqrt(a, tol).matrix(), psd_sqrt(b, tol).matrix(), tol);
  const HermitianMatrix rhs = range_projector(psd_sqrt(a + b, tol).matrix(), tol);
  return op_norm(ComplexMatrix(lhs.matrix() - rhs.matrix())) <= tol.eq_tol;
}

ParallelSumResult parallel_sum(const HermitianMatrix& a, const HermitianMatrix& b, const Tolerances& tol) {
  require_psd_pair(a, b, tol);
  const ComplexMatrix a_root = psd_sqrt(a, tol).matrix();
  const ComplexMatrix b_root = psd_sqrt(b, tol).matrix();
  const ComplexMatrix sum_root = psd_sqrt(a + b, tol).matrix();

  const ComplexMatrix c = douglas::douglas_solve(a_root, sum_root, tol).C;
  const ComplexMatrix d = douglas::douglas_solve(b_root, sum_root, tol).C;
  HermitianMatrix via_douglas(ComplexMatrix(a_root * c.adjoint() * d * b_root));
  HermitianMatrix via_pinv(ComplexMatrix(a.matrix() * moore_penrose((a + b).matrix(), tol) * b.matrix()));

  const double scale = std::max(1.0, op_norm(via_pinv));
  const double residual = op_norm(ComplexMatrix(via_douglas.matrix() - via_pinv.matrix())) / scale;
  if (residual > tol.eq_tol) {
    std::ostringstream os;
    os << "parallel sum routes differ by " << residual;
    throw Error(ErrorCode::InternalDisagreement, os.str());
  }
  HermitianMatrix value = via_pinv;
  return {std::move(value), std::move(via_douglas), std::move(via_pinv), residual};
}

}  // namespace blockpos::parallel
