#pragma once

#include <string>
#include <vector>

#include "blockpos/core_linalg.hpp"

namespace blockpos::gallery {

/// Frozen regression values, computed with a 40-digit eigenvalue oracle.
inline constexpr double kPartialIsometryMinEigenvalue = -0.28077640640441513746;  // (3 - sqrt 17) / 4
inline constexpr double kPartialIsometryPerturbedMinEigenvalue = -0.24403065089105498633;
inline constexpr double kHadamardAbsGapMinEigenvalue = -0.0067900579108199221297;
inline constexpr double kFrozenTolerance = 1e-10;

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Reproduces every worked example and counterexample; one entry per check.
std::vector<Check> run_gallery(const Tolerances& tol);

}  // namespace blockpos::gallery
