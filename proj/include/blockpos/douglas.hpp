#pragma once

#include <cstdint>
#include <limits>
#include <optional>

#include "blockpos/core_linalg.hpp"

namespace blockpos::douglas {

/**
 * @brief Canonical factor C of A = BC.
 *
 * C = B^dagger A is the unique solution with ||C||^2 equal to the optimal
 * majorization constant, N(C) = N(A) and R(C) inside R(B*).
 */
struct DouglasSolution {
  ComplexMatrix C;
  double norm_sq = 0.0;   // ||C||^2
  double mu_inf = 0.0;    // inf{mu : AA* <= mu BB*}
  double residual = 0.0;  // ||A - BC|| / max(1, ||A||)
};

struct EquivalenceReport {
  bool range_inclusion = false;
  bool factorization_found = false;
  double majorization_const = std::numeric_limits<double>::infinity();
};

/// Returns +inf when R(A) is not contained in R(B).
double majorization_constant(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerances& tol);

/// Throws RangeNotIncluded when A = BC has no solution.
DouglasSolution douglas_solve(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerances& tol);

/// Evaluates range inclusion, factorization and majorization separately.
/// Throws InternalDisagreement if they do not agree.
EquivalenceReport equivalence_report(const ComplexMatrix& a, const ComplexMatrix& b,
                                     const Tolerances& tol);

/// S = (AA* + BB*)^{1/2}. Checks that R(S) = R(A) + R(B) and throws
/// InternalDisagreement otherwise.
HermitianMatrix range_sum_root(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerances& tol);

struct MultiFactor {
  ComplexMatrix C1;
  ComplexMatrix C2;
};

/// A = B1 C1 + B2 C2 via the Douglas solution of [[A,0],[0,0]] = [[B1,B2],[0,0]] C.
MultiFactor multi_factor(const ComplexMatrix& a, const ComplexMatrix& b1, const ComplexMatrix& b2,
                         const Tolerances& tol);

/// Truth values of the three conditions of the two-operator range conjecture.
struct ConjectureRecord {
  bool ranges_included = false;   // R(A1)+R(A2) in R(B1)+R(B2)
  bool factorizable = false;      // each Ak = B1 C1k + B2 C2k
  bool majorized = false;         // A1A1*+A2A2* <= k^2 (B1B1*+B2B2*)
};

ConjectureRecord conjecture_probe(const ComplexMatrix& a1, const ComplexMatrix& a2,
                                  const ComplexMatrix& b1, const ComplexMatrix& b2,
                                  const Tolerances& tol);

/// X = A^dagger C B^dagger solving AXB = C. Throws Unsolvable when
/// R(C) is not in R(A) or R(C*) is not in R(B*).
ComplexMatrix solve_axb(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c,
                        const Tolerances& tol);

/**
 * @brief Adjoint of T with respect to the semi-inner product <x, y>_A = <Ax, y>.
 *
 * Returns T# = A^dagger T* A when R(T*A) is contained in R(A), otherwise
 * nothing. The defining identity is checked on `samples` random vector pairs
 * drawn from `seed`; a failure raises InternalDisagreement.
 */
std::optional<ComplexMatrix> a_adjoint(const ComplexMatrix& t, const HermitianMatrix& a,
                                       const Tolerances& tol, std::uint64_t seed = 0,
                                       int samples = 8);

}  // namespace blockpos::douglas
