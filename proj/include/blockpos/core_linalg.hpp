#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <initializer_list>

#include "blockpos/errors.hpp"

namespace blockpos {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/**
 * @brief Numerical cutoffs used by every positivity, rank and equality decision.
 *
 * All three are relative: psd_tol scales with max(1, ||H||), rank_tol with the
 * largest singular value, eq_tol with the norm of the quantity being compared.
 */
struct Tolerances {
  double psd_tol = 1e-9;
  double rank_tol = 1e-9;
  double eq_tol = 1e-9;

  static Tolerances uniform(double tol) { return Tolerances{tol, tol, tol}; }

  /// Throws PreconditionFailed on a negative or non-finite field.
  void validate() const;
};

/// Square matrix whose conjugate symmetry is enforced once, at construction.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  /// Symmetrizes (M + M*) / 2. Throws DimensionMismatch for non-square input
  /// and MalformedInput for non-finite entries.
  explicit HermitianMatrix(const ComplexMatrix& m);

  /// Like the constructor, but rejects M when ||M - M*|| > eq_tol * ||M||.
  static HermitianMatrix checked(const ComplexMatrix& m, const Tolerances& tol);

  static HermitianMatrix identity(Index n);
  static HermitianMatrix zero(Index n);
  static HermitianMatrix diagonal(std::initializer_list<double> entries);
  static HermitianMatrix diagonal(const RealVector& entries);

  Index dim() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  Complex operator()(Index i, Index j) const { return m_(i, j); }

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator-() const;
  HermitianMatrix operator*(double s) const;

 private:
  struct Trusted {};
  HermitianMatrix(ComplexMatrix m, Trusted) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

inline HermitianMatrix operator*(double s, const HermitianMatrix& h) { return h * s; }

struct SpectralDecomposition {
  RealVector eigenvalues;     // descending
  ComplexMatrix eigenvectors; // columns, unitary
};

struct PolarDecomposition {
  ComplexMatrix U;  // partial isometry, zero on N(A)
  HermitianMatrix P;  // |A|
};

bool all_finite(const ComplexMatrix& m);

/// Spectral (operator 2-) norm.
double op_norm(const ComplexMatrix& m);
double op_norm(const HermitianMatrix& h);

RealVector singular_values(const ComplexMatrix& m);
Index numerical_rank(const ComplexMatrix& m, const Tolerances& tol);

SpectralDecomposition hermitian_eigen(const HermitianMatrix& h);
double min_eigenvalue(const HermitianMatrix& h);

/// min eigenvalue >= -psd_tol * max(1, ||H||).
bool is_psd(const HermitianMatrix& h, const Tolerances& tol);

/// min eigenvalue > psd_tol * ||H|| (and H nonzero).
bool is_strictly_positive(const HermitianMatrix& h, const Tolerances& tol);

/**
 * @brief Applies a real function to the spectrum of a numerically PSD matrix.
 *
 * Throws NotPSD if the minimum eigenvalue is below -psd_tol * max(1, ||H||).
 * Eigenvalues at or below rank_tol * ||H|| (including the clamped negative
 * ones) are treated as exact zeros and mapped to 0, whatever f does, so the
 * kernel of the result is the numerical kernel of H.
 */
HermitianMatrix psd_function(const HermitianMatrix& h, const Tolerances& tol,
                             const std::function<double(double)>& f);

HermitianMatrix psd_sqrt(const HermitianMatrix& h, const Tolerances& tol);

/// H^alpha on the numerical support of H; negative alpha gives the
/// Moore-Penrose power (H^dagger)^|alpha|.
HermitianMatrix psd_power(const HermitianMatrix& h, double alpha, const Tolerances& tol);

/// |A| = (A*A)^{1/2}
HermitianMatrix abs_op(const ComplexMatrix& a, const Tolerances& tol);

ComplexMatrix moore_penrose(const ComplexMatrix& a, const Tolerances& tol);

/// Canonical polar decomposition A = U|A| with U = A |A|^dagger. A must be square.
PolarDecomposition polar(const ComplexMatrix& a, const Tolerances& tol);

/// Orthogonal projector onto R(A), from left singular vectors above rank_tol * sigma_max.
HermitianMatrix range_projector(const ComplexMatrix& a, const Tolerances& tol);

/// ||(I - P_B) A|| / max(1, ||A||); the quantity range_included thresholds.
double range_excess(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerances& tol);

/// R(A) subset of R(B). Requires equal row counts.
bool range_included(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerances& tol);

/// Projector onto R(A) + R(B), computed from the column space of [A B].
HermitianMatrix range_sum_projector(const ComplexMatrix& a, const ComplexMatrix& b,
                                    const Tolerances& tol);

/// Entrywise product of equal-shape matrices.
ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b);

/// [[a, 0], [0, b]] for square or rectangular blocks.
ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace blockpos
