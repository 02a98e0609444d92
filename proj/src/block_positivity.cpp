#include "blockpos/block_positivity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "blockpos/douglas.hpp"
#include "blockpos/random.hpp"

namespace blockpos::block {

namespace {

const Complex kI(0.0, 1.0);

bool is_selfadjoint(const ComplexMatrix& x, const Tolerances& tol) {
  return x.rows() == x.cols() &&
         op_norm(ComplexMatrix(x - x.adjoint())) <= tol.eq_tol * std::max(1.0, op_norm(x));
}

void require_psd_diagonals(const Block2x2& block, const Tolerances& tol, const char* what) {
  if (!is_psd(block.A(), tol) || !is_psd(block.B(), tol)) {
    throw Error(ErrorCode::NotPSD, std::string(what) + ": diagonal blocks must be PSD");
  }
}

// Solves A Z = X for strictly positive A.
ComplexMatrix positive_solve(const HermitianMatrix& a, const ComplexMatrix& x) {
  Eigen::LLT<ComplexMatrix> llt(a.matrix());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::PreconditionFailed, "Cholesky factorization failed");
  }
  return llt.solve(x);
}

double scale_of(const HermitianMatrix& h) { return std::max(1.0, op_norm(h)); }

}  // namespace

std::string_view to_string(RouteStatus s) noexcept {
  switch (s) {
    case RouteStatus::Positive: return "positive";
    case RouteStatus::NotPositive: return "not_positive";
    case RouteStatus::NotApplicable: return "not_applicable";
    case RouteStatus::Failed: return "failed";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// construction

Block2x2::Block2x2(HermitianMatrix a, ComplexMatrix x, HermitianMatrix b)
    : a_(std::move(a)), x_(std::move(x)), b_(std::move(b)) {
  const Index n = a_.dim();
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "blocks must be at least 1x1");
  if (b_.dim() != n || x_.rows() != n || x_.cols() != n) {
    std::ostringstream os;
    os << "block shapes differ: A " << n << ", X " << x_.rows() << "x" << x_.cols() << ", B "
       << b_.dim();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  if (!all_finite(x_)) throw Error(ErrorCode::MalformedInput, "non-finite entry in X");
}

HermitianMatrix Block2x2::assembled() const { return assemble(a_, x_, b_); }

HermitianMatrix assemble(const HermitianMatrix& a, const ComplexMatrix& x, const HermitianMatrix& b) {
  const Index n = a.dim();
  if (b.dim() != n || x.rows() != n || x.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "assemble needs n x n blocks");
  }
  ComplexMatrix m(2 * n, 2 * n);
  m << a.matrix(), x, x.adjoint(), b.matrix();
  return HermitianMatrix(m);
}

// ---------------------------------------------------------------------------
// Schur complement routes

PositivityCertificate certify_eig(const Block2x2& block, const Tolerances& tol) {
  const HermitianMatrix m = block.assembled();
  PositivityCertificate cert;
  cert.verdict = is_psd(m, tol);
  cert.min_eigenvalue = min_eigenvalue(m);
  return cert;
}

PositivityCertificate schur_certify(const Block2x2& block, const Tolerances& tol) {
  if (!is_strictly_positive(block.A(), tol)) {
    throw Error(ErrorCode::PreconditionFailed, "Schur route needs A strictly positive");
  }
  const ComplexMatrix& x = block.X();
  HermitianMatrix s(ComplexMatrix(block.B().matrix() - x.adjoint() * positive_solve(block.A(), x)));
  PositivityCertificate cert;
  cert.verdict = is_psd(s, tol);
  cert.schur_complement = std::move(s);
  return cert;
}

PositivityCertificate schur_certify_flipped(const Block2x2& block, const Tolerances& tol) {
  if (!is_strictly_positive(block.B(), tol)) {
    throw Error(ErrorCode::PreconditionFailed, "flipped Schur route needs B strictly positive");
  }
  const ComplexMatrix x_adj = block.X().adjoint();
  HermitianMatrix s(ComplexMatrix(block.A().matrix() - block.X() * positive_solve(block.B(), x_adj)));
  PositivityCertificate cert;
  cert.verdict = is_psd(s, tol);
  cert.schur_complement = std::move(s);
  return cert;
}

HermitianMatrix minimal_completion(const HermitianMatrix& a, const ComplexMatrix& x, const Tolerances& tol) {
  if (x.rows() != a.dim()) throw Error(ErrorCode::DimensionMismatch, "X rows must match A");
  if (!is_strictly_positive(a, tol)) {
    throw Error(ErrorCode::PreconditionFailed, "minimal completion needs A strictly positive");
  }
  return HermitianMatrix(ComplexMatrix(x.adjoint() * positive_solve(a, x)));
}

// ---------------------------------------------------------------------------
// Douglas-based routes

bool range_necessary(const Block2x2& block, const Tolerances& tol) {
  require_psd_diagonals(block, tol, "range_necessary");
  const HermitianMatrix a_root = psd_sqrt(block.A(), tol);
  const HermitianMatrix b_root = psd_sqrt(block.B(), tol);
  const ComplexMatrix x_adj = block.X().adjoint();
  return range_included(block.X(), a_root.matrix(), tol) &&
         range_included(x_adj, b_root.matrix(), tol);
}

ComplexMatrix factor_certify(const Block2x2& block, const Tolerances& tol) {
  require_psd_diagonals(block, tol, "factor_certify");
  const HermitianMatrix b_root = psd_sqrt(block.B(), tol);
  const ComplexMatrix x_adj = block.X().adjoint();
  // X* = B^{1/2} C; RangeNotIncluded propagates from the solver.
  ComplexMatrix c = douglas::douglas_solve(x_adj, b_root.matrix(), tol).C;

  const double x_scale = std::max(1.0, op_norm(block.X()));
  const double err = op_norm(ComplexMatrix(c.adjoint() * b_root.matrix() - block.X()));
  if (err > tol.eq_tol * x_scale) {
    std::ostringstream os;
    os << "C* B^1/2 misses X by " << err;
    throw Error(ErrorCode::InternalDisagreement, os.str());
  }
  const HermitianMatrix gap = block.A() - HermitianMatrix(ComplexMatrix(c.adjoint() * c));
  if (!is_psd(gap, tol)) {
    std::ostringstream os;
    os << "A - C*C has eigenvalue " << min_eigenvalue(gap);
    throw Error(ErrorCode::NotPositive, os.str());
  }
  return c;
}

ComplexMatrix contraction_certify(const Block2x2& block, const Tolerances& tol) {
  require_psd_diagonals(block, tol, "contraction_certify");
  const HermitianMatrix a_root = psd_sqrt(block.A(), tol);
  const HermitianMatrix b_root = psd_sqrt(block.B(), tol);
  const ComplexMatrix x_adj = block.X().adjoint();
  if (!range_included(block.X(), a_root.matrix(), tol) ||
      !range_included(x_adj, b_root.matrix(), tol)) {
    throw Error(ErrorCode::NotPositive, "R(X) or R(X*) escapes the square-root ranges");
  }
  ComplexMatrix k = moore_penrose(a_root.matrix(), tol) * block.X() * moore_penrose(b_root.matrix(), tol);

  const double err = op_norm(ComplexMatrix(a_root.matrix() * k * b_root.matrix() - block.X()));
  if (err > tol.eq_tol * std::max(1.0, op_norm(block.X()))) {
    std::ostringstream os;
    os << "A^1/2 K B^1/2 misses X by " << err;
    throw Error(ErrorCode::InternalDisagreement, os.str());
  }
  const double k_norm = op_norm(k);
  if (k_norm > 1.0 + tol.psd_tol) {
    std::ostringstream os;
    os << "||K|| = " << k_norm << " exceeds 1";
    throw Error(ErrorCode::NotPositive, os.str());
  }
  return k;
}

// ---------------------------------------------------------------------------
// Gram factorization and dilation

namespace {

void check_gram(const Block2x2& block, const GramFactors& g, const Tolerances& tol) {
  const double bound = tol.eq_tol * scale_of(block.assembled());
  const double ea = op_norm(ComplexMatrix(g.Y1.adjoint() * g.Y1 - block.A().matrix()));
  const double eb = op_norm(ComplexMatrix(g.Y2.adjoint() * g.Y2 - block.B().matrix()));
  const double ex = op_norm(ComplexMatrix(g.Y1.adjoint() * g.Y2 - block.X()));
  if (ea > bound || eb > bound || ex > bound) {
    std::ostringstream os;
    os << "Gram reconstruction residuals " << ea << ", " << eb << ", " << ex;
    throw Error(ErrorCode::InternalDisagreement, os.str());
  }
}

}  // namespace

GramFactors gram_factorize(const Block2x2& block, const Tolerances& tol) {
  const HermitianMatrix m = block.assembled();
  if (!is_psd(m, tol)) throw Error(ErrorCode::NotPositive, "block matrix is not PSD");
  const HermitianMatrix root = psd_sqrt(m, tol);
  const Index n = block.n();
  GramFactors g{root.matrix().leftCols(n), root.matrix().rightCols(n)};
  check_gram(block, g, tol);
  return g;
}

GramFactors gram_factorize_dilation(const Block2x2& block, const Tolerances& tol) {
  const ComplexMatrix k = contraction_certify(block, tol);
  const ComplexMatrix g = unitary_dilation(k, tol);
  const Index n = block.n();
  ComplexMatrix a_col = ComplexMatrix::Zero(2 * n, n);
  a_col.topRows(n) = psd_sqrt(block.A(), tol).matrix();
  ComplexMatrix b_col = ComplexMatrix::Zero(2 * n, n);
  b_col.topRows(n) = psd_sqrt(block.B(), tol).matrix();
  GramFactors out{g.adjoint() * a_col, b_col};
  check_gram(block, out, tol);
  return out;
}

ComplexMatrix unitary_dilation(const ComplexMatrix& k, const Tolerances& tol) {
  if (k.rows() != k.cols()) throw Error(ErrorCode::DimensionMismatch, "dilation needs square K");
  const double k_norm = op_norm(k);
  if (k_norm > 1.0 + tol.psd_tol) {
    std::ostringstream os;
    os << "||K|| = " << k_norm << " exceeds 1";
    throw Error(ErrorCode::NotContraction, os.str());
  }
  const Index n = k.rows();
  const HermitianMatrix id = HermitianMatrix::identity(n);
  // Norms up to 1 + psd_tol leave eigenvalues of I - KK* within the clamp band.
  const HermitianMatrix left = psd_sqrt(id - HermitianMatrix(ComplexMatrix(k * k.adjoint())), tol);
  const HermitianMatrix right = psd_sqrt(id - HermitianMatrix(ComplexMatrix(k.adjoint() * k)), tol);
  ComplexMatrix g(2 * n, 2 * n);
  g << k, left.matrix(), right.matrix(), -k.adjoint();
  return g;
}

bool contraction_block_test(const ComplexMatrix& k, const Tolerances& tol) {
  if (k.rows() != k.cols()) throw Error(ErrorCode::DimensionMismatch, "K must be square");
  const Index n = k.rows();
  return is_psd(assemble(HermitianMatrix::identity(n), k, HermitianMatrix::identity(n)), tol);
}

// ---------------------------------------------------------------------------
// Cauchy-Schwarz falsifier

std::optional<CauchySchwarzWitness> cauchy_schwarz_falsify(const Block2x2& block, int samples,
                                                           std::uint64_t seed, const Tolerances& tol) {
  require_psd_diagonals(block, tol, "cauchy_schwarz_falsify");
  const Index n = block.n();
  const ComplexMatrix& a = block.A().matrix();
  const ComplexMatrix& b = block.B().matrix();
  const ComplexMatrix& x = block.X();
  const HermitianMatrix m = block.assembled();
  const double slack = tol.psd_tol * scale_of(m);

  auto violates = [&](const ComplexVector& u, const ComplexVector& v) -> std::optional<CauchySchwarzWitness> {
    const double un = u.norm();
    const double vn = v.norm();
    if (un == 0.0 || vn == 0.0) return std::nullopt;
    const double lhs = std::abs(u.dot(x * v));
    const double qa = std::max(0.0, u.dot(a * u).real());
    const double qb = std::max(0.0, v.dot(b * v).real());
    const double rhs = std::sqrt(qa * qb);
    if (lhs - rhs > slack * un * vn) return CauchySchwarzWitness{u, v, lhs, rhs};
    return std::nullopt;
  };

  // Deterministic candidates: split eigenvectors of M with negative eigenvalues.
  const SpectralDecomposition sd = hermitian_eigen(m);
  for (Index k = sd.eigenvalues.size() - 1; k >= 0 && sd.eigenvalues(k) < 0.0; --k) {
    const ComplexVector w = sd.eigenvectors.col(k);
    if (auto hit = violates(w.head(n), w.tail(n))) return hit;
  }

  // Directions x = A^dagger X y from the Schur argument, with y running over
  // the eigenvectors of B - X* A^dagger X and the standard basis.
  const ComplexMatrix a_pinv_x = moore_penrose(a, tol) * x;
  const HermitianMatrix schur(ComplexMatrix(b - x.adjoint() * a_pinv_x));
  const SpectralDecomposition ss = hermitian_eigen(schur);
  for (Index k = 0; k < n; ++k) {
    const ComplexVector y = ss.eigenvectors.col(k);
    if (auto hit = violates(a_pinv_x * y, y)) return hit;
    const ComplexVector e = ComplexVector::Unit(n, k);
    if (auto hit = violates(a_pinv_x * e, e)) return hit;
  }

  RandomSource rng(seed);
  for (int s = 0; s < samples; ++s) {
    const ComplexVector u = rng.complex_vector(n);
    const ComplexVector v = rng.complex_vector(n);
    if (auto hit = violates(u, v)) return hit;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// self-adjoint off-diagonal propositions

NormCertificate selfadjoint_norm_certify(const Block2x2& block, const Tolerances& tol) {
  if (!is_selfadjoint(block.X(), tol)) {
    throw Error(ErrorCode::PreconditionFailed, "norm criterion needs self-adjoint X");
  }
  const HermitianMatrix sum = block.A() + block.B();
  if (!is_strictly_positive(sum, tol)) {
    throw Error(ErrorCode::PreconditionFailed, "norm criterion needs A + B strictly positive");
  }
  const ComplexMatrix w = psd_power(sum, -0.5, tol).matrix();
  const ComplexMatrix inner = block.B().matrix() - block.A().matrix() + 2.0 * kI * block.X();
  NormCertificate out;
  out.operand_norm = op_norm(ComplexMatrix(w * inner * w));
  out.verdict = out.operand_norm <= 1.0 + tol.psd_tol;
  return out;
}

bool offdiag_bounds(const Block2x2& block, const std::vector<double>& t_grid, const Tolerances& tol) {
  if (!is_selfadjoint(block.X(), tol)) {
    throw Error(ErrorCode::PreconditionFailed, "off-diagonal bounds need self-adjoint X");
  }
  if (!is_psd(block.assembled(), tol)) {
    throw Error(ErrorCode::PreconditionFailed, "off-diagonal bounds need M >= 0");
  }
  const HermitianMatrix x(block.X());
  for (double t : t_grid) {
    if (!(t > 0.0 && t < 1.0)) throw Error(ErrorCode::PreconditionFailed, "t must lie in (0, 1)");
    const double c = 1.0 / (2.0 * std::sqrt(t * (1.0 - t)));
    const HermitianMatrix bound = (t * block.B() + (1.0 - t) * block.A()) * c;
    if (!is_psd(bound - x, tol) || !is_psd(bound + x, tol)) return false;
  }
  return true;
}

bool symmetrized_certify(const Block2x2& block, const Tolerances& tol) {
  if (!is_selfadjoint(block.X(), tol)) {
    throw Error(ErrorCode::PreconditionFailed, "symmetrized criterion needs self-adjoint X");
  }
  const HermitianMatrix sum = block.A() + block.B();
  if (!is_strictly_positive(sum, tol)) {
    throw Error(ErrorCode::PreconditionFailed, "symmetrized criterion needs A + B strictly positive");
  }
  const HermitianMatrix m = block.assembled();
  const HermitianMatrix swapped = assemble(block.B(), block.X(), block.A());
  const bool via_block = is_psd(m + swapped, tol);

  const HermitianMatrix x(block.X());
  const HermitianMatrix half = sum * 0.5;
  const bool via_bounds = is_psd(half - x, tol) && is_psd(half + x, tol);
  if (via_block != via_bounds) {
    throw Error(ErrorCode::InternalDisagreement, "M + VMV* disagrees with +-X <= (A+B)/2");
  }
  return via_block;
}

bool equal_diagonal_certify(const HermitianMatrix& a, const HermitianMatrix& x, const Tolerances& tol) {
  const bool via_block = is_psd(assemble(a, x.matrix(), a), tol);
  const bool via_bounds = is_psd(a - x, tol) && is_psd(a + x, tol);
  if (via_block != via_bounds) {
    throw Error(ErrorCode::InternalDisagreement, "[[A,X],[X,A]] disagrees with +-X <= A");
  }
  return via_block;
}

// ---------------------------------------------------------------------------
// partial isometry corollary

bool partial_isometry_bound_holds(const Block2x2& block, const ComplexMatrix& u, const Tolerances& tol) {
  if (u.rows() != block.n() || u.cols() != block.n()) {
    throw Error(ErrorCode::DimensionMismatch, "U must match the block size");
  }
  require_psd_diagonals(block, tol, "partial_isometry_bound");
  const ComplexMatrix w = psd_sqrt(block.A(), tol).matrix() * u * psd_sqrt(block.B(), tol).matrix();
  return is_psd(abs_op(w, tol) - abs_op(block.X(), tol), tol);
}

ComplexMatrix partial_isometry_bound(const Block2x2& block, const Tolerances& tol) {
  if (!is_strictly_positive(block.B(), tol)) {
    throw Error(ErrorCode::PreconditionFailed, "partial isometry bound needs B strictly positive");
  }
  if (!is_psd(block.assembled(), tol)) {
    throw Error(ErrorCode::PreconditionFailed, "partial isometry bound needs M >= 0");
  }
  const ComplexMatrix t = block.X() * psd_power(block.B(), -0.5, tol).matrix();
  ComplexMatrix u = polar(t, tol).U;
  if (!partial_isometry_bound_holds(block, u, tol)) {
    throw Error(ErrorCode::InternalDisagreement, "|X| <= |A^1/2 U B^1/2| fails on a positive block");
  }
  return u;
}

PartialIsometryRecord partial_isometry_check(const Block2x2& block, const ComplexMatrix& u,
                                             const Tolerances& tol) {
  PartialIsometryRecord rec;
  rec.bound_holds = partial_isometry_bound_holds(block, u, tol);
  const PositivityCertificate eig = certify_eig(block, tol);
  rec.block_positive = eig.verdict;
  rec.min_eigenvalue = *eig.min_eigenvalue;
  return rec;
}

PartialIsometryRecord partial_isometry_converse_demo(const Tolerances& tol) {
  const Block2x2 block(HermitianMatrix::diagonal({2.0, 1.0}), ComplexMatrix::Identity(2, 2),
                       HermitianMatrix::diagonal({1.0, 0.5}));
  ComplexMatrix swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  PartialIsometryRecord rec = partial_isometry_check(block, swap, tol);
  if (!rec.bound_holds || rec.block_positive) {
    throw Error(ErrorCode::GalleryBroken, "partial isometry converse no longer reproduces");
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Hadamard products

HadamardRecord hadamard_block(const HermitianMatrix& y, const HermitianMatrix& z, const Tolerances& tol) {
  if (y.dim() != z.dim()) throw Error(ErrorCode::DimensionMismatch, "Y and Z must share a size");
  const HermitianMatrix abs_prod(hadamard(abs_op(y.matrix(), tol).matrix(), abs_op(z.matrix(), tol).matrix()));
  const HermitianMatrix prod(hadamard(y.matrix(), z.matrix()));
  HadamardRecord rec;
  rec.block_psd = is_psd(assemble(abs_prod, prod.matrix(), abs_prod), tol);
  rec.plus_bound = is_psd(abs_prod - prod, tol);
  rec.minus_bound = is_psd(abs_prod + prod, tol);
  const HermitianMatrix gap = abs_prod - abs_op(prod.matrix(), tol);
  rec.abs_bound = is_psd(gap, tol);
  rec.abs_gap_min_eigenvalue = min_eigenvalue(gap);
  return rec;
}

// ---------------------------------------------------------------------------
// upper-triangular block inverse

ComplexMatrix block_triangular_inverse(const ComplexMatrix& r, const ComplexMatrix& s,
                                       const ComplexMatrix& t, const Tolerances& tol) {
  if (r.rows() != r.cols() || t.rows() != t.cols() || s.rows() != r.rows() || s.cols() != t.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "need square R, T and S of shape rows(R) x cols(T)");
  }
  if (numerical_rank(r, tol) != r.rows()) throw Error(ErrorCode::Singular, "R is numerically singular");
  if (numerical_rank(t, tol) != t.rows()) throw Error(ErrorCode::Singular, "T is numerically singular");
  const ComplexMatrix r_inv = r.fullPivLu().inverse();
  const ComplexMatrix t_inv = t.fullPivLu().inverse();
  const Index p = r.rows();
  const Index q = t.rows();
  ComplexMatrix out = ComplexMatrix::Zero(p + q, p + q);
  out.topLeftCorner(p, p) = r_inv;
  out.topRightCorner(p, q) = -r_inv * s * t_inv;
  out.bottomRightCorner(q, q) = t_inv;
  return out;
}

// ---------------------------------------------------------------------------
// all routes

PositivityCertificate certify_all(const Block2x2& block, const Tolerances& tol, std::uint64_t seed,
                                  int samples, const std::optional<ComplexMatrix>& u) {
  PositivityCertificate cert = certify_eig(block, tol);
  const bool oracle = cert.verdict;
  {
    std::ostringstream os;
    os.precision(17);
    os << "min eigenvalue " << *cert.min_eigenvalue;
    cert.routes.push_back({"eigenvalue", oracle ? RouteStatus::Positive : RouteStatus::NotPositive, os.str()});
  }

  // Runs one route; codes in `negative` mean "not positive", anything else is a failure.
  auto run = [&](const std::string& name, bool applicable, const std::function<std::string()>& body,
                 std::initializer_list<ErrorCode> negative) {
    RouteResult r{name, RouteStatus::NotApplicable, ""};
    if (applicable) {
      try {
        r.detail = body();
        r.status = RouteStatus::Positive;
      } catch (const Error& e) {
        const bool expected = std::find(negative.begin(), negative.end(), e.code()) != negative.end();
        r.status = expected ? RouteStatus::NotPositive : RouteStatus::Failed;
        r.detail = e.what();
      }
    }
    cert.routes.push_back(std::move(r));
  };

  const bool diag_psd = is_psd(block.A(), tol) && is_psd(block.B(), tol);
  cert.routes.push_back({"diagonal_blocks", diag_psd ? RouteStatus::NotApplicable : RouteStatus::NotPositive,
                         diag_psd ? "A and B are PSD" : "A or B is not PSD"});

  run("schur", is_strictly_positive(block.A(), tol), [&] {
    PositivityCertificate c = schur_certify(block, tol);
    cert.schur_complement = c.schur_complement;
    if (!c.verdict) throw Error(ErrorCode::NotPositive, "B - X*A^-1 X is not PSD");
    return std::string("B - X*A^-1 X is PSD");
  }, {ErrorCode::NotPositive});

  run("schur_flipped", is_strictly_positive(block.B(), tol), [&] {
    if (!schur_certify_flipped(block, tol).verdict) {
      throw Error(ErrorCode::NotPositive, "A - X B^-1 X* is not PSD");
    }
    return std::string("A - X B^-1 X* is PSD");
  }, {ErrorCode::NotPositive});

  run("factor", diag_psd, [&] {
    (void)factor_certify(block, tol);
    return std::string("X = C* B^1/2 with C*C <= A");
  }, {ErrorCode::NotPositive, ErrorCode::RangeNotIncluded});

  run("contraction", diag_psd, [&] {
    cert.contraction_K = contraction_certify(block, tol);
    std::ostringstream os;
    os.precision(17);
    os << "||K|| = " << op_norm(*cert.contraction_K);
    return os.str();
  }, {ErrorCode::NotPositive});

  run("gram_sqrt", true, [&] {
    GramFactors g = gram_factorize(block, tol);
    cert.gram_Y1 = std::move(g.Y1);
    cert.gram_Y2 = std::move(g.Y2);
    return std::string("A = Y1*Y1, B = Y2*Y2, X = Y1*Y2");
  }, {ErrorCode::NotPositive});

  run("gram_dilation", diag_psd, [&] {
    (void)gram_factorize_dilation(block, tol);
    return std::string("Gram factors from the unitary dilation of K");
  }, {ErrorCode::NotPositive});

  run("cauchy_schwarz", diag_psd, [&] {
    if (auto w = cauchy_schwarz_falsify(block, samples, seed, tol)) {
      std::ostringstream os;
      os.precision(17);
      os << "witness |<x,Xy>| = " << w->lhs << " > " << w->rhs;
      throw Error(ErrorCode::NotPositive, os.str());
    }
    return std::string("no violating pair found");
  }, {ErrorCode::NotPositive});

  const bool x_selfadjoint = is_selfadjoint(block.X(), tol);
  run("selfadjoint_norm", x_selfadjoint && is_strictly_positive(block.A() + block.B(), tol), [&] {
    const NormCertificate nc = selfadjoint_norm_certify(block, tol);
    std::ostringstream os;
    os.precision(17);
    os << "operand norm " << nc.operand_norm;
    if (!nc.verdict) throw Error(ErrorCode::NotPositive, os.str());
    return os.str();
  }, {ErrorCode::NotPositive});

  const double ab_gap = op_norm(ComplexMatrix(block.A().matrix() - block.B().matrix()));
  run("equal_diagonal", x_selfadjoint && ab_gap <= tol.eq_tol * scale_of(block.A()), [&] {
    if (!equal_diagonal_certify(block.A(), HermitianMatrix(block.X()), tol)) {
      throw Error(ErrorCode::NotPositive, "+-X <= A fails");
    }
    return std::string("+-X <= A");
  }, {ErrorCode::NotPositive});

  if (diag_psd) cert.range_condition = range_necessary(block, tol);

  bool polar_bound_checked = false;
  if (u) {
    if (diag_psd) cert.partial_isometry_bound = partial_isometry_bound_holds(block, *u, tol);
  } else if (diag_psd && is_strictly_positive(block.B(), tol)) {
    const ComplexMatrix t = block.X() * psd_power(block.B(), -0.5, tol).matrix();
    cert.partial_isometry_bound = partial_isometry_bound_holds(block, polar(t, tol).U, tol);
    polar_bound_checked = true;
  }

  bool agree = true;
  for (const RouteResult& r : cert.routes) {
    if (r.status == RouteStatus::Failed) agree = false;
    if (r.status == RouteStatus::Positive && !oracle) agree = false;
    if (r.status == RouteStatus::NotPositive && oracle) agree = false;
  }
  if (oracle && cert.range_condition && !*cert.range_condition) agree = false;
  if (oracle && polar_bound_checked && !*cert.partial_isometry_bound) agree = false;
  cert.routes_agree = agree;
  return cert;
}

}  // namespace blockpos::block
