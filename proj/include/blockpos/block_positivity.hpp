#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blockpos/core_linalg.hpp"

namespace blockpos::block {

/**
 * @brief The 2x2 operator matrix M = [[A, X], [X*, B]].
 *
 * All three blocks are n x n with n >= 1. Construction rejects anything else
 * with DimensionMismatch.
 */
class Block2x2 {
 public:
  Block2x2(HermitianMatrix a, ComplexMatrix x, HermitianMatrix b);

  const HermitianMatrix& A() const noexcept { return a_; }
  const ComplexMatrix& X() const noexcept { return x_; }
  const HermitianMatrix& B() const noexcept { return b_; }
  Index n() const noexcept { return a_.dim(); }

  /// The assembled 2n x 2n Hermitian matrix.
  HermitianMatrix assembled() const;

 private:
  HermitianMatrix a_;
  ComplexMatrix x_;
  HermitianMatrix b_;
};

/// [[A, X], [X*, B]]. Throws DimensionMismatch unless all blocks are n x n.
HermitianMatrix assemble(const HermitianMatrix& a, const ComplexMatrix& x, const HermitianMatrix& b);

enum class RouteStatus { Positive, NotPositive, NotApplicable, Failed };

std::string_view to_string(RouteStatus s) noexcept;

struct RouteResult {
  std::string name;
  RouteStatus status = RouteStatus::NotApplicable;
  std::string detail;
};

struct PositivityCertificate {
  bool verdict = false;
  std::optional<double> min_eigenvalue;
  std::optional<HermitianMatrix> schur_complement;
  std::optional<ComplexMatrix> contraction_K;
  std::optional<ComplexMatrix> gram_Y1;
  std::optional<ComplexMatrix> gram_Y2;
  bool routes_agree = true;

  // Filled by certify_all.
  std::vector<RouteResult> routes;
  std::optional<bool> range_condition;       // R(X) in R(A^1/2) and R(X*) in R(B^1/2)
  std::optional<bool> partial_isometry_bound;  // |X| <= |A^1/2 U B^1/2|
};

struct GramFactors {
  ComplexMatrix Y1;  // 2n x n
  ComplexMatrix Y2;  // 2n x n
};

struct CauchySchwarzWitness {
  ComplexVector x;
  ComplexVector y;
  double lhs = 0.0;  // |<x, X y>|
  double rhs = 0.0;  // sqrt(<x, A x> <y, B y>)
};

struct NormCertificate {
  bool verdict = false;
  double operand_norm = 0.0;  // ||(B+A)^{-1/2} (B - A + 2iX) (B+A)^{-1/2}||
};

struct PartialIsometryRecord {
  bool bound_holds = false;
  bool block_positive = false;
  double min_eigenvalue = 0.0;
};

struct HadamardRecord {
  bool block_psd = false;          // [[|Y|o|Z|, YoZ], [YoZ, |Y|o|Z|]] >= 0
  bool plus_bound = false;         // YoZ <= |Y|o|Z|
  bool minus_bound = false;        // -YoZ <= |Y|o|Z|
  bool abs_bound = false;          // |YoZ| <= |Y|o|Z|, false in general
  double abs_gap_min_eigenvalue = 0.0;  // min eig of |Y|o|Z| - |YoZ|
};

/// Eigenvalue oracle: verdict = is_psd(M).
PositivityCertificate certify_eig(const Block2x2& block, const Tolerances& tol);

/// B - X* A^{-1} X >= 0. Requires A strictly positive (PreconditionFailed).
PositivityCertificate schur_certify(const Block2x2& block, const Tolerances& tol);

/// A - X B^{-1} X* >= 0. Requires B strictly positive (PreconditionFailed).
PositivityCertificate schur_certify_flipped(const Block2x2& block, const Tolerances& tol);

/// Smallest completion X* A^{-1} X making the block positive.
HermitianMatrix minimal_completion(const HermitianMatrix& a, const ComplexMatrix& x, const Tolerances& tol);

/// Necessary condition R(X) in R(A^1/2), R(X*) in R(B^1/2). NotPSD on an indefinite diagonal.
bool range_necessary(const Block2x2& block, const Tolerances& tol);

/**
 * @brief C with X = C* B^{1/2} and C*C <= A.
 *
 * C is the Douglas solution of X* = B^{1/2} C. Throws RangeNotIncluded when
 * R(X*) leaves R(B^{1/2}) and NotPositive when A - C*C is not PSD.
 */
ComplexMatrix factor_certify(const Block2x2& block, const Tolerances& tol);

/**
 * @brief Contraction K with X = A^{1/2} K B^{1/2}.
 *
 * Uses the closed form K = (A^{1/2})^dagger X (B^{1/2})^dagger. Throws
 * NotPositive when the range condition fails or ||K|| > 1 + psd_tol.
 */
ComplexMatrix contraction_certify(const Block2x2& block, const Tolerances& tol);

/// Column blocks of M^{1/2}. Throws NotPositive when M is not PSD.
GramFactors gram_factorize(const Block2x2& block, const Tolerances& tol);

/// Y1 = G* [A^{1/2}; 0], Y2 = [B^{1/2}; 0] with G the unitary dilation of the contraction K.
GramFactors gram_factorize_dilation(const Block2x2& block, const Tolerances& tol);

/// G = [[K, (I-KK*)^{1/2}], [(I-K*K)^{1/2}, -K*]]. Throws NotContraction.
ComplexMatrix unitary_dilation(const ComplexMatrix& k, const Tolerances& tol);

/// is_psd([[I, K], [K*, I]])
bool contraction_block_test(const ComplexMatrix& k, const Tolerances& tol);

/// Searches for (x, y) with |<x,Xy>|^2 > <x,Ax><y,By>. Returns nothing for a PSD block.
std::optional<CauchySchwarzWitness> cauchy_schwarz_falsify(const Block2x2& block, int samples,
                                                           std::uint64_t seed, const Tolerances& tol);

NormCertificate selfadjoint_norm_certify(const Block2x2& block, const Tolerances& tol);

/// +-X <= (tB + (1-t)A) / (2 sqrt(t(1-t))) for every t in the grid.
bool offdiag_bounds(const Block2x2& block, const std::vector<double>& t_grid, const Tolerances& tol);

/// is_psd(M + V M V*) with V the swap unitary; cross-checked against +-X <= (A+B)/2.
bool symmetrized_certify(const Block2x2& block, const Tolerances& tol);

/// [[A, X], [X, A]] >= 0, cross-checked against +-X <= A.
bool equal_diagonal_certify(const HermitianMatrix& a, const HermitianMatrix& x, const Tolerances& tol);

/// is_psd(|A^{1/2} U B^{1/2}| - |X|) for a given U. No positivity requirement on M.
bool partial_isometry_bound_holds(const Block2x2& block, const ComplexMatrix& u, const Tolerances& tol);

/// Partial isometry U from the polar decomposition of X B^{-1/2}; asserts the bound.
ComplexMatrix partial_isometry_bound(const Block2x2& block, const Tolerances& tol);

/// Evaluates the bound for U and the eigenvalue verdict on one instance.
PartialIsometryRecord partial_isometry_check(const Block2x2& block, const ComplexMatrix& u,
                                             const Tolerances& tol);

/// The fixed instance A = diag(2,1), B = diag(1,1/2), X = I, U = swap: the bound
/// holds yet the block is not positive. GalleryBroken if that ever changes.
PartialIsometryRecord partial_isometry_converse_demo(const Tolerances& tol);

HadamardRecord hadamard_block(const HermitianMatrix& y, const HermitianMatrix& z, const Tolerances& tol);

/// Inverse of [[R, S], [0, T]]. Throws Singular when R or T is numerically singular.
ComplexMatrix block_triangular_inverse(const ComplexMatrix& r, const ComplexMatrix& s,
                                       const ComplexMatrix& t, const Tolerances& tol);

/// Runs every applicable route and reports whether they agree with the eigenvalue oracle.
/// When `u` is given it replaces the polar partial isometry in the bound check.
PositivityCertificate certify_all(const Block2x2& block, const Tolerances& tol, std::uint64_t seed,
                                  int samples, const std::optional<ComplexMatrix>& u = std::nullopt);

}  // namespace blockpos::block
