#include "blockpos/core_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace blockpos {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotContraction: return "NotContraction";
    case ErrorCode::RangeNotIncluded: return "RangeNotIncluded";
    case ErrorCode::Unsolvable: return "Unsolvable";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::InternalDisagreement: return "InternalDisagreement";
    case ErrorCode::GalleryBroken: return "GalleryBroken";
    case ErrorCode::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

void Tolerances::validate() const {
  for (double v : {psd_tol, rank_tol, eq_tol}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::PreconditionFailed, "tolerances must be finite and nonnegative");
    }
  }
}

// ---------------------------------------------------------------------------
// HermitianMatrix

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << "Hermitian matrix must be square, got " << m.rows() << "x" << m.cols();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  if (!all_finite(m)) throw Error(ErrorCode::MalformedInput, "non-finite matrix entry");
  m_ = (m + m.adjoint()) * 0.5;
  for (Index i = 0; i < m_.rows(); ++i) m_(i, i) = Complex(m_(i, i).real(), 0.0);
}

HermitianMatrix HermitianMatrix::checked(const ComplexMatrix& m, const Tolerances& tol) {
  HermitianMatrix h(m);
  const double skew = op_norm(ComplexMatrix(m - m.adjoint()));
  if (skew > tol.eq_tol * op_norm(m)) {
    std::ostringstream os;
    os << "matrix is not Hermitian (||M - M*|| = " << skew << ")";
    throw Error(ErrorCode::MalformedInput, os.str());
  }
  return h;
}

HermitianMatrix HermitianMatrix::identity(Index n) {
  return HermitianMatrix(ComplexMatrix::Identity(n, n), Trusted{});
}

HermitianMatrix HermitianMatrix::zero(Index n) {
  return HermitianMatrix(ComplexMatrix::Zero(n, n), Trusted{});
}

HermitianMatrix HermitianMatrix::diagonal(std::initializer_list<double> entries) {
  RealVector d(static_cast<Index>(entries.size()));
  Index i = 0;
  for (double e : entries) d(i++) = e;
  return diagonal(d);
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& entries) {
  if (!entries.allFinite()) throw Error(ErrorCode::MalformedInput, "non-finite diagonal entry");
  ComplexMatrix m = entries.cast<Complex>().asDiagonal();
  return HermitianMatrix(std::move(m), Trusted{});
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  if (dim() != o.dim()) throw Error(ErrorCode::DimensionMismatch, "Hermitian sum of unequal sizes");
  return HermitianMatrix(ComplexMatrix(m_ + o.m_), Trusted{});
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  if (dim() != o.dim()) throw Error(ErrorCode::DimensionMismatch, "Hermitian difference of unequal sizes");
  return HermitianMatrix(ComplexMatrix(m_ - o.m_), Trusted{});
}

HermitianMatrix HermitianMatrix::operator-() const { return HermitianMatrix(ComplexMatrix(-m_), Trusted{}); }

HermitianMatrix HermitianMatrix::operator*(double s) const {
  return HermitianMatrix(ComplexMatrix(m_ * s), Trusted{});
}

// ---------------------------------------------------------------------------
// norms and spectra

bool all_finite(const ComplexMatrix& m) { return m.allFinite(); }

RealVector singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) return RealVector();
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

double op_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

double op_norm(const HermitianMatrix& h) {
  if (h.dim() == 0) return 0.0;
  const RealVector ev = hermitian_eigen(h).eigenvalues;
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

Index numerical_rank(const ComplexMatrix& m, const Tolerances& tol) {
  const RealVector s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cutoff = tol.rank_tol * s(0);
  return static_cast<Index>((s.array() > cutoff).count());
}

SpectralDecomposition hermitian_eigen(const HermitianMatrix& h) {
  const Index n = h.dim();
  if (n == 0) return {RealVector(), ComplexMatrix()};
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix());
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NonConvergence, "Hermitian eigensolver did not converge");
  }
  // Eigen sorts ascending; reverse to descending.
  SpectralDecomposition out{es.eigenvalues().reverse(), es.eigenvectors().rowwise().reverse()};
  return out;
}

double min_eigenvalue(const HermitianMatrix& h) {
  if (h.dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NonConvergence, "Hermitian eigensolver did not converge");
  }
  return es.eigenvalues()(0);
}

bool is_psd(const HermitianMatrix& h, const Tolerances& tol) {
  if (h.dim() == 0) return true;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NonConvergence, "Hermitian eigensolver did not converge");
  }
  const RealVector& ev = es.eigenvalues();
  const double norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  return ev(0) >= -tol.psd_tol * std::max(1.0, norm);
}

bool is_strictly_positive(const HermitianMatrix& h, const Tolerances& tol) {
  if (h.dim() == 0) return false;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NonConvergence, "Hermitian eigensolver did not converge");
  }
  const RealVector& ev = es.eigenvalues();
  const double norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  return norm > 0.0 && ev(0) > tol.psd_tol * norm;
}

// ---------------------------------------------------------------------------
// functional calculus

HermitianMatrix psd_function(const HermitianMatrix& h, const Tolerances& tol,
                             const std::function<double(double)>& f) {
  if (h.dim() == 0) return h;
  const SpectralDecomposition sd = hermitian_eigen(h);
  const RealVector& ev = sd.eigenvalues;
  const double norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  const double min_ev = ev(ev.size() - 1);
  if (min_ev < -tol.psd_tol * std::max(1.0, norm)) {
    std::ostringstream os;
    os << "minimum eigenvalue " << min_ev << " below -psd_tol * max(1, ||H||)";
    throw Error(ErrorCode::NotPSD, os.str());
  }
  const double zero_cut = tol.rank_tol * norm;
  RealVector fv(ev.size());
  for (Index i = 0; i < ev.size(); ++i) fv(i) = ev(i) > zero_cut ? f(ev(i)) : 0.0;
  const ComplexMatrix& q = sd.eigenvectors;
  return HermitianMatrix(ComplexMatrix(q * fv.cast<Complex>().asDiagonal() * q.adjoint()));
}

HermitianMatrix psd_sqrt(const HermitianMatrix& h, const Tolerances& tol) {
  return psd_function(h, tol, [](double x) { return std::sqrt(x); });
}

HermitianMatrix psd_power(const HermitianMatrix& h, double alpha, const Tolerances& tol) {
  return psd_function(h, tol, [alpha](double x) { return std::pow(x, alpha); });
}

HermitianMatrix abs_op(const ComplexMatrix& a, const Tolerances& tol) {
  return psd_sqrt(HermitianMatrix(ComplexMatrix(a.adjoint() * a)), tol);
}

// ---------------------------------------------------------------------------
// pseudoinverse, polar, ranges

ComplexMatrix moore_penrose(const ComplexMatrix& a, const Tolerances& tol) {
  if (a.size() == 0) return ComplexMatrix::Zero(a.cols(), a.rows());
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = svd.singularValues();
  ComplexMatrix out = ComplexMatrix::Zero(a.cols(), a.rows());
  if (s(0) == 0.0) return out;
  const double cutoff = tol.rank_tol * s(0);
  for (Index k = 0; k < s.size() && s(k) > cutoff; ++k) {
    out += svd.matrixV().col(k) * (1.0 / s(k)) * svd.matrixU().col(k).adjoint();
  }
  return out;
}

PolarDecomposition polar(const ComplexMatrix& a, const Tolerances& tol) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "polar requires a square matrix");
  HermitianMatrix p = abs_op(a, tol);
  ComplexMatrix u = a * moore_penrose(p.matrix(), tol);
  return {std::move(u), std::move(p)};
}

HermitianMatrix range_projector(const ComplexMatrix& a, const Tolerances& tol) {
  const Index m = a.rows();
  if (a.cols() == 0 || m == 0) return HermitianMatrix::zero(m);
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU);
  const RealVector& s = svd.singularValues();
  if (s(0) == 0.0) return HermitianMatrix::zero(m);
  const double cutoff = tol.rank_tol * s(0);
  const Index r = static_cast<Index>((s.array() > cutoff).count());
  const auto ur = svd.matrixU().leftCols(r);
  return HermitianMatrix(ComplexMatrix(ur * ur.adjoint()));
}

double range_excess(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerances& tol) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "range comparison needs equal row counts");
  }
  const HermitianMatrix p = range_projector(b, tol);
  const ComplexMatrix outside = a - p.matrix() * a;
  return op_norm(outside) / std::max(1.0, op_norm(a));
}

bool range_included(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerances& tol) {
  return range_excess(a, b, tol) <= tol.eq_tol;
}

HermitianMatrix range_sum_projector(const ComplexMatrix& a, const ComplexMatrix& b,
                                    const Tolerances& tol) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "range sum needs equal row counts");
  }
  ComplexMatrix stacked(a.rows(), a.cols() + b.cols());
  stacked << a, b;
  return range_projector(stacked, tol);
}

ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "Hadamard product needs equal shapes");
  }
  return a.cwiseProduct(b);
}

ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out = ComplexMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace blockpos
