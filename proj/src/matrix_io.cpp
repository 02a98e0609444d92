#include "blockpos/matrix_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace blockpos::io {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedInput, what); }

Index read_dim(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    malformed(std::string("matrix field '") + key + "' must be an integer");
  }
  const auto v = j.at(key).get<std::int64_t>();
  if (v < 0) malformed(std::string("matrix field '") + key + "' must be nonnegative");
  return static_cast<Index>(v);
}

Eigen::MatrixXd read_part(const json& j, const char* key, Index rows, Index cols) {
  const json& part = j.at(key);
  if (!part.is_array() || static_cast<Index>(part.size()) != rows) {
    malformed(std::string("'") + key + "' must be an array of " + std::to_string(rows) + " rows");
  }
  Eigen::MatrixXd out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = part[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      malformed(std::string("'") + key + "' row " + std::to_string(i) + " must hold " +
                std::to_string(cols) + " numbers");
    }
    for (Index k = 0; k < cols; ++k) {
      const json& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number()) malformed(std::string("'") + key + "' holds a non-numeric entry");
      const double d = v.get<double>();
      if (!std::isfinite(d)) malformed("non-finite matrix entry");
      out(i, k) = d;
    }
  }
  return out;
}

}  // namespace

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object()) malformed("matrix must be a JSON object");
  const Index rows = read_dim(j, "rows");
  const Index cols = read_dim(j, "cols");
  if (!j.contains("re")) malformed("matrix is missing 're'");
  const Eigen::MatrixXd re = read_part(j, "re", rows, cols);
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(rows, cols);
  if (j.contains("im")) im = read_part(j, "im", rows, cols);
  ComplexMatrix m(rows, cols);
  m.real() = re;
  m.imag() = im;
  return m;
}

json matrix_to_json(const ComplexMatrix& m) {
  json re = json::array();
  json im = json::array();
  bool has_imag = false;
  for (Index i = 0; i < m.rows(); ++i) {
    json rr = json::array();
    json ri = json::array();
    for (Index k = 0; k < m.cols(); ++k) {
      rr.push_back(m(i, k).real());
      ri.push_back(m(i, k).imag());
      has_imag = has_imag || m(i, k).imag() != 0.0;
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  json out = {{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}};
  if (has_imag) out["im"] = std::move(im);
  return out;
}

HermitianMatrix hermitian_from_json(const json& j, const Tolerances& tol) {
  const ComplexMatrix m = matrix_from_json(j);
  if (m.rows() != m.cols()) malformed("Hermitian input must be square");
  return HermitianMatrix::checked(m, tol);
}

BlockInput block_from_json(const json& j, const Tolerances& tol) {
  if (!j.is_object()) malformed("block must be a JSON object");
  for (const char* key : {"A", "X", "B"}) {
    if (!j.contains(key)) malformed(std::string("block is missing '") + key + "'");
  }
  HermitianMatrix a = hermitian_from_json(j.at("A"), tol);
  ComplexMatrix x = matrix_from_json(j.at("X"));
  HermitianMatrix b = hermitian_from_json(j.at("B"), tol);
  std::optional<ComplexMatrix> u;
  if (j.contains("U")) u = matrix_from_json(j.at("U"));
  try {
    BlockInput in{block::Block2x2(std::move(a), std::move(x), std::move(b)), std::move(u)};
    if (in.U && (in.U->rows() != in.block.n() || in.U->cols() != in.block.n())) {
      malformed("U must match the block size");
    }
    return in;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DimensionMismatch) malformed(e.what());
    throw;
  }
}

json block_to_json(const block::Block2x2& b) {
  return {{"A", matrix_to_json(b.A().matrix())}, {"X", matrix_to_json(b.X())}, {"B", matrix_to_json(b.B().matrix())}};
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) malformed("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    malformed("cannot parse " + path.string() + ": " + e.what());
  }
}

}  // namespace blockpos::io
