#pragma once

#include "blockpos/core_linalg.hpp"

namespace blockpos::parallel {

struct ParallelSumResult {
  HermitianMatrix value;        // A:B
  HermitianMatrix via_douglas;  // A^{1/2} C* D B^{1/2}
  HermitianMatrix via_pinv;     // A (A+B)^dagger B
  double agreement_residual = 0.0;
};

/// R(A^{1/2}) + R(B^{1/2}) == R((A+B)^{1/2}) as projectors within eq_tol.
/// Throws NotPSD on an indefinite input.
bool range_sum_sqrt_identity(const HermitianMatrix& a, const HermitianMatrix& b, const Tolerances& tol);

/**
 * @brief Parallel sum of two PSD matrices, computed two ways.
 *
 * via_douglas uses the Douglas solutions C, D of A^{1/2} = (A+B)^{1/2} C and
 * B^{1/2} = (A+B)^{1/2} D; via_pinv is A (A+B)^dagger B. Disagreement beyond
 * eq_tol raises InternalDisagreement.
 */
ParallelSumResult parallel_sum(const HermitianMatrix& a, const HermitianMatrix& b, const Tolerances& tol);

}  // namespace blockpos::parallel
