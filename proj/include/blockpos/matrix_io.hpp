#pragma once

#include <filesystem>
#include <optional>

#include "json.hpp"

#include "blockpos/block_positivity.hpp"
#include "blockpos/core_linalg.hpp"

namespace blockpos::io {

using json = nlohmann::json;

/// {"rows": m, "cols": n, "re": [[...]], "im": [[...]]}; "im" optional.
/// Any structural problem or non-finite entry raises MalformedInput.
ComplexMatrix matrix_from_json(const json& j);
json matrix_to_json(const ComplexMatrix& m);

/// Symmetrized on load; rejected (MalformedInput) when ||H - H*|| > eq_tol ||H||.
HermitianMatrix hermitian_from_json(const json& j, const Tolerances& tol);

struct BlockInput {
  block::Block2x2 block;
  std::optional<ComplexMatrix> U;  // optional partial isometry for the bound check
};

/// {"A": <matrix>, "X": <matrix>, "B": <matrix>} plus an optional "U".
BlockInput block_from_json(const json& j, const Tolerances& tol);
json block_to_json(const block::Block2x2& b);

/// Parses a JSON file; missing files and syntax errors raise MalformedInput.
json load_json_file(const std::filesystem::path& path);

}  // namespace blockpos::io
