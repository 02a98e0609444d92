#include "blockpos/douglas.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "blockpos/random.hpp"

namespace blockpos::douglas {

namespace {

void require_same_rows(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows()) {
    std::ostringstream os;
    os << what << ": row counts differ (" << a.rows() << " vs " << b.rows() << ")";
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

double largest_eigenvalue(const ComplexMatrix& w) {
  if (w.size() == 0) return 0.0;
  const HermitianMatrix g(ComplexMatrix(w * w.adjoint()));
  return std::max(0.0, hermitian_eigen(g).eigenvalues(0));
}

}  // namespace

double majorization_constant(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerances& tol) {
  require_same_rows(a, b, "majorization_constant");
  if (!range_included(a, b, tol)) return std::numeric_limits<double>::infinity();
  return largest_eigenvalue(moore_penrose(b, tol) * a);
}

DouglasSolution douglas_solve(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerances& tol) {
  require_same_rows(a, b, "douglas_solve");
  if (!range_included(a, b, tol)) {
    std::ostringstream os;
    os << "R(A) is not contained in R(B) (excess " << range_excess(a, b, tol) << ")";
    throw Error(ErrorCode::RangeNotIncluded, os.str());
  }
  DouglasSolution sol;
  sol.C = moore_penrose(b, tol) * a;
  const double cn = op_norm(sol.C);
  sol.norm_sq = cn * cn;
  sol.mu_inf = largest_eigenvalue(sol.C);
  sol.residual = op_norm(ComplexMatrix(a - b * sol.C)) / std::max(1.0, op_norm(a));
  if (sol.residual > tol.eq_tol) {
    std::ostringstream os;
    os << "factorization residual " << sol.residual << " exceeds eq_tol";
    throw Error(ErrorCode::RangeNotIncluded, os.str());
  }
  return sol;
}

EquivalenceReport equivalence_report(const ComplexMatrix& a, const ComplexMatrix& b,
                                     const Tolerances& tol) {
  require_same_rows(a, b, "equivalence_report");
  EquivalenceReport rep;
  rep.range_inclusion = range_included(a, b, tol);
  try {
    (void)douglas_solve(a, b, tol);
    rep.factorization_found = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::RangeNotIncluded) throw;
    rep.factorization_found = false;
  }
  rep.majorization_const = majorization_constant(a, b, tol);
  const bool majorized = std::isfinite(rep.majorization_const);
  if (rep.range_inclusion != rep.factorization_found || rep.range_inclusion != majorized) {
    std::ostringstream os;
    os << "Douglas conditions disagree: range=" << rep.range_inclusion
       << " factor=" << rep.factorization_found << " majorization=" << rep.majorization_const;
    throw Error(ErrorCode::InternalDisagreement, os.str());
  }
  return rep;
}

HermitianMatrix range_sum_root(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerances& tol) {
  require_same_rows(a, b, "range_sum_root");
  const HermitianMatrix gram(ComplexMatrix(a * a.adjoint() + b * b.adjoint()));
  HermitianMatrix s = psd_sqrt(gram, tol);
  const HermitianMatrix lhs = range_projector(s.matrix(), tol);
  const HermitianMatrix rhs = range_sum_projector(a, b, tol);
  const double gap = op_norm(ComplexMatrix(lhs.matrix() - rhs.matrix()));
  if (gap > tol.eq_tol) {
    std::ostringstream os;
    os << "R(sqrt(AA*+BB*)) differs from R(A)+R(B) by " << gap;
    throw Error(ErrorCode::InternalDisagreement, os.str());
  }
  return s;
}

MultiFactor multi_factor(const ComplexMatrix& a, const ComplexMatrix& b1, const ComplexMatrix& b2,
                         const Tolerances& tol) {
  require_same_rows(a, b1, "multi_factor");
  require_same_rows(a, b2, "multi_factor");
  const Index m = a.rows();
  const Index k = a.cols();
  const Index p1 = b1.cols();
  const Index p2 = b2.cols();

  // S = [[A, 0], [0, 0]], T = [[B1, B2], [0, 0]]; S = T C with C = [[C1, C3], [C2, C4]].
  ComplexMatrix s = ComplexMatrix::Zero(2 * m, 2 * k);
  s.topLeftCorner(m, k) = a;
  ComplexMatrix t = ComplexMatrix::Zero(2 * m, p1 + p2);
  t.topLeftCorner(m, p1) = b1;
  t.block(0, p1, m, p2) = b2;

  const DouglasSolution sol = douglas_solve(s, t, tol);
  MultiFactor out{sol.C.block(0, 0, p1, k), sol.C.block(p1, 0, p2, k)};
  const ComplexMatrix rebuilt = b1 * out.C1 + b2 * out.C2;
  const double err = op_norm(ComplexMatrix(rebuilt - a));
  if (err > tol.eq_tol * std::max(1.0, op_norm(a))) {
    std::ostringstream os;
    os << "multi_factor reconstruction error " << err;
    throw Error(ErrorCode::InternalDisagreement, os.str());
  }
  return out;
}

ConjectureRecord conjecture_probe(const ComplexMatrix& a1, const ComplexMatrix& a2,
                                  const ComplexMatrix& b1, const ComplexMatrix& b2,
                                  const Tolerances& tol) {
  require_same_rows(a1, a2, "conjecture_probe");
  require_same_rows(a1, b1, "conjecture_probe");
  require_same_rows(a1, b2, "conjecture_probe");
  ConjectureRecord rec;

  ComplexMatrix a_stack(a1.rows(), a1.cols() + a2.cols());
  a_stack << a1, a2;
  ComplexMatrix b_stack(b1.rows(), b1.cols() + b2.cols());
  b_stack << b1, b2;
  rec.ranges_included = range_included(a_stack, b_stack, tol);

  try {
    (void)multi_factor(a1, b1, b2, tol);
    (void)multi_factor(a2, b1, b2, tol);
    rec.factorizable = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::RangeNotIncluded) throw;
    rec.factorizable = false;
  }

  // Majorization compares the square roots of the summed Gram operators,
  // which carry the same ranges as the stacked operators.
  const HermitianMatrix a_root = range_sum_root(a1, a2, tol);
  const HermitianMatrix b_root = range_sum_root(b1, b2, tol);
  rec.majorized = std::isfinite(majorization_constant(a_root.matrix(), b_root.matrix(), tol));
  return rec;
}

ComplexMatrix solve_axb(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c,
                        const Tolerances& tol) {
  if (a.rows() != c.rows() || b.cols() != c.cols()) {
    std::ostringstream os;
    os << "AXB = C shapes do not compose: A " << a.rows() << "x" << a.cols() << ", B " << b.rows()
       << "x" << b.cols() << ", C " << c.rows() << "x" << c.cols();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  if (!range_included(c, a, tol)) throw Error(ErrorCode::Unsolvable, "R(C) is not contained in R(A)");
  const ComplexMatrix c_adj = c.adjoint();
  const ComplexMatrix b_adj = b.adjoint();
  if (!range_included(c_adj, b_adj, tol)) {
    throw Error(ErrorCode::Unsolvable, "R(C*) is not contained in R(B*)");
  }
  return moore_penrose(a, tol) * c * moore_penrose(b, tol);
}

std::optional<ComplexMatrix> a_adjoint(const ComplexMatrix& t, const HermitianMatrix& a,
                                       const Tolerances& tol, std::uint64_t seed, int samples) {
  if (t.rows() != t.cols() || t.rows() != a.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "a_adjoint needs square T matching A");
  }
  if (!is_psd(a, tol)) throw Error(ErrorCode::NotPSD, "semi-inner product weight is not PSD");

  const ComplexMatrix ta = t.adjoint() * a.matrix();
  if (!range_included(ta, a.matrix(), tol)) return std::nullopt;
  ComplexMatrix sharp = moore_penrose(a.matrix(), tol) * ta;

  // <Tx, y>_A = y* A T x must equal <x, T#y>_A = (T#y)* A x.
  const double scale = std::max(1.0, op_norm(a.matrix())) * std::max(1.0, op_norm(t));
  RandomSource rng(seed);
  for (int s = 0; s < samples; ++s) {
    const ComplexVector x = rng.complex_vector(t.rows());
    const ComplexVector y = rng.complex_vector(t.rows());
    const Complex lhs = y.dot(a.matrix() * (t * x));
    const Complex rhs = (sharp * y).dot(a.matrix() * x);
    if (std::abs(lhs - rhs) > 10.0 * tol.eq_tol * scale * x.norm() * y.norm()) {
      throw Error(ErrorCode::InternalDisagreement, "A-adjoint identity fails on a sample");
    }
  }
  return sharp;
}

}  // namespace blockpos::douglas
