#include "blockpos/gallery.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "blockpos/block_positivity.hpp"
#include "blockpos/douglas.hpp"
#include "blockpos/parallel_sum.hpp"
#include "blockpos/random.hpp"

namespace blockpos::gallery {

namespace {

using block::Block2x2;

ComplexMatrix mat2(double a, double b, double c, double d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

HermitianMatrix herm2(double a, double b, double d) { return HermitianMatrix(mat2(a, b, b, d)); }

Block2x2 partial_isometry_block() {
  return Block2x2(HermitianMatrix::diagonal({2.0, 1.0}), ComplexMatrix::Identity(2, 2),
                  HermitianMatrix::diagonal({1.0, 0.5}));
}

Block2x2 shifted_identity_block() {
  return Block2x2(HermitianMatrix::identity(2) * 2.0, ComplexMatrix::Zero(2, 2),
                  HermitianMatrix::identity(2) * -1.0);
}

// Runs body; an Error with the given code counts as the expected outcome.
bool expect_error(ErrorCode code, const std::function<void()>& body, std::string& detail) {
  try {
    body();
    detail = "no error raised";
    return false;
  } catch (const Error& e) {
    detail = e.what();
    return e.code() == code;
  }
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

bool close(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  return a.rows() == b.rows() && a.cols() == b.cols() && op_norm(ComplexMatrix(a - b)) <= tol;
}

}  // namespace

std::vector<Check> run_gallery(const Tolerances& tol) {
  std::vector<Check> out;
  auto add = [&](std::string name, const std::function<bool(std::string&)>& body) {
    Check c{std::move(name), false, ""};
    try {
      c.passed = body(c.detail);
    } catch (const std::exception& e) {
      c.passed = false;
      c.detail = std::string("unexpected error: ") + e.what();
    }
    out.push_back(std::move(c));
  };

  const HermitianMatrix y = herm2(2, 2, 1);
  const HermitianMatrix z = herm2(1, 3, 3);
  const HermitianMatrix abs_y = abs_op(y.matrix(), tol);

  add("schur_gap_of_gallery_block_is_indefinite", [&](std::string& d) {
    const HermitianMatrix gap = HermitianMatrix::diagonal({1.0, 0.5}) - HermitianMatrix::diagonal({0.5, 1.0});
    d = "min eigenvalue " + num(min_eigenvalue(gap));
    return !is_psd(gap, tol) && std::abs(min_eigenvalue(gap) + 0.5) <= 1e-15;
  });

  add("abs_of_hadamard_product_squares_back", [&](std::string& d) {
    const ComplexMatrix p = hadamard(y.matrix(), z.matrix());
    const HermitianMatrix s = abs_op(p, tol);
    const double err = op_norm(ComplexMatrix(s.matrix() * s.matrix() - p.adjoint() * p));
    d = "||S^2 - P*P|| = " + num(err);
    return close(p, mat2(2, 6, 6, 3), 0.0) && err <= tol.eq_tol * op_norm(ComplexMatrix(p.adjoint() * p));
  });

  add("range_equals_range_of_root_of_gram", [&](std::string& d) {
    RandomSource rng(11);
    for (int rank = 1; rank <= 4; ++rank) {
      const ComplexMatrix a = rng.complex_gaussian(4, rank) * rng.complex_gaussian(rank, 4);
      const HermitianMatrix root = psd_sqrt(HermitianMatrix(ComplexMatrix(a * a.adjoint())), tol);
      const double gap = op_norm(ComplexMatrix(range_projector(a, tol).matrix() - range_projector(root.matrix(), tol).matrix()));
      if (!range_included(a, root.matrix(), tol) || gap > 1e-8) {
        d = "rank " + std::to_string(rank) + " projector gap " + num(gap);
        return false;
      }
    }
    d = "ranks 1..4 agree";
    return true;
  });

  add("gallery_block_assembles", [&](std::string& d) {
    ComplexMatrix expected(4, 4);
    expected << 2, 0, 1, 0,
                0, 1, 0, 1,
                1, 0, 1, 0,
                0, 1, 0, 0.5;
    d = "[[diag(2,1), I], [I, diag(1,1/2)]]";
    return close(partial_isometry_block().assembled().matrix(), expected, 0.0);
  });

  add("gallery_block_is_not_positive", [&](std::string& d) {
    const auto cert = block::certify_eig(partial_isometry_block(), tol);
    d = "min eigenvalue " + num(*cert.min_eigenvalue);
    return !cert.verdict && std::abs(*cert.min_eigenvalue - kPartialIsometryMinEigenvalue) <= kFrozenTolerance;
  });

  add("abs_y_block_is_positive", [&](std::string& d) {
    const auto cert = block::certify_eig(Block2x2(abs_y, y.matrix(), abs_y), tol);
    d = "min eigenvalue " + num(*cert.min_eigenvalue);
    return cert.verdict;
  });

  add("schur_route_on_contraction_block", [&](std::string& d) {
    const ComplexMatrix k = mat2(0.5, 0.5, 0.0, 0.5);
    const auto cert = block::schur_certify(
        Block2x2(HermitianMatrix::identity(2), k, HermitianMatrix::identity(2)), tol);
    d = "||K|| = " + num(op_norm(k));
    return cert.verdict && op_norm(k) <= 1.0;
  });

  add("schur_route_rejects_gallery_block", [&](std::string& d) {
    const auto cert = block::schur_certify(partial_isometry_block(), tol);
    d = "Schur complement min eigenvalue " + num(min_eigenvalue(*cert.schur_complement));
    return !cert.verdict && close(cert.schur_complement->matrix(), HermitianMatrix::diagonal({0.5, -0.5}).matrix(), 1e-14);
  });

  add("flipped_schur_route_rejects_gallery_block", [&](std::string& d) {
    const auto cert = block::schur_certify_flipped(partial_isometry_block(), tol);
    d = "A - X B^-1 X* min eigenvalue " + num(min_eigenvalue(*cert.schur_complement));
    return !cert.verdict;
  });

  add("schur_route_rejects_shifted_identity", [&](std::string& d) {
    const auto cert = block::schur_certify(shifted_identity_block(), tol);
    d = "Schur complement min eigenvalue " + num(min_eigenvalue(*cert.schur_complement));
    return !cert.verdict;
  });

  add("minimal_completion_of_gallery_block", [&](std::string& d) {
    const HermitianMatrix b0 = block::minimal_completion(HermitianMatrix::diagonal({2.0, 1.0}),
                                                         ComplexMatrix::Identity(2, 2), tol);
    d = "B0 = diag(" + num(b0(0, 0).real()) + ", " + num(b0(1, 1).real()) + ")";
    return close(b0.matrix(), HermitianMatrix::diagonal({0.5, 1.0}).matrix(), 1e-14);
  });

  add("factor_route_rejects_gallery_block", [&](std::string& d) {
    return expect_error(ErrorCode::NotPositive, [&] { (void)block::factor_certify(partial_isometry_block(), tol); }, d);
  });

  add("gram_route_rejects_gallery_block", [&](std::string& d) {
    return expect_error(ErrorCode::NotPositive, [&] { (void)block::gram_factorize(partial_isometry_block(), tol); }, d);
  });

  add("norm_criterion_on_shifted_identity", [&](std::string& d) {
    const auto nc = block::selfadjoint_norm_certify(shifted_identity_block(), tol);
    d = "operand norm " + num(nc.operand_norm);
    return !nc.verdict && std::abs(nc.operand_norm - 3.0) <= 1e-12;
  });

  add("offdiag_bound_at_one_half", [&](std::string& d) {
    const Block2x2 blk(abs_y, y.matrix(), abs_y);
    const bool holds = block::offdiag_bounds(blk, {0.5}, tol);
    const HermitianMatrix half = (abs_y + abs_y) * 0.5;
    const bool direct = is_psd(half - y, tol) && is_psd(half + y, tol);
    d = "bound at t = 1/2 is +-X <= (A+B)/2";
    return holds && direct;
  });

  add("symmetrized_criterion_on_shifted_identity", [&](std::string& d) {
    const Block2x2 blk = shifted_identity_block();
    const bool sym = block::symmetrized_certify(blk, tol);
    const bool psd = block::certify_eig(blk, tol).verdict;
    d = std::string("M + VMV* psd: ") + (sym ? "true" : "false") + ", M psd: " + (psd ? "true" : "false");
    return sym && !psd;
  });

  add("equal_diagonal_abs_y", [&](std::string& d) {
    d = "[[|Y|, Y], [Y, |Y|]]";
    return block::equal_diagonal_certify(abs_y, y, tol);
  });

  add("partial_isometry_converse_fails", [&](std::string& d) {
    const auto rec = block::partial_isometry_converse_demo(tol);
    d = "bound holds, min eigenvalue " + num(rec.min_eigenvalue);
    return rec.bound_holds && !rec.block_positive &&
           std::abs(rec.min_eigenvalue - kPartialIsometryMinEigenvalue) <= kFrozenTolerance;
  });

  add("hadamard_abs_bound_fails", [&](std::string& d) {
    const auto rec = block::hadamard_block(y, z, tol);
    d = "one-sided bounds " + std::string(rec.plus_bound && rec.minus_bound ? "hold" : "fail") +
        ", |YoZ| gap min eigenvalue " + num(rec.abs_gap_min_eigenvalue);
    return rec.block_psd && rec.plus_bound && rec.minus_bound && !rec.abs_bound &&
           std::abs(rec.abs_gap_min_eigenvalue - kHadamardAbsGapMinEigenvalue) <= kFrozenTolerance;
  });

  add("douglas_solution_for_invertible_factor", [&](std::string& d) {
    RandomSource rng(21);
    const ComplexMatrix b = rng.complex_gaussian(3, 3);
    const ComplexMatrix a = rng.complex_gaussian(3, 3);
    const auto sol = douglas::douglas_solve(a, b, tol);
    const double err = op_norm(ComplexMatrix(sol.C - b.fullPivLu().solve(a)));
    d = "||C - B^-1 A|| = " + num(err);
    return err <= 1e-8 * std::max(1.0, op_norm(sol.C));
  });

  add("polar_isometry_is_adjoint_douglas_solution", [&](std::string& d) {
    RandomSource rng(22);
    const ComplexMatrix a = rng.complex_gaussian(4, 2) * rng.complex_gaussian(2, 4);
    const PolarDecomposition pd = polar(a, tol);
    const ComplexMatrix a_adj = a.adjoint();
    const ComplexMatrix c = douglas::douglas_solve(a_adj, pd.P.matrix(), tol).C;
    const double err = op_norm(ComplexMatrix(pd.U - c.adjoint()));
    d = "||U - C*|| = " + num(err);
    return err <= 1e-8;
  });

  add("range_and_majorization_conjecture_legs_agree", [&](std::string& d) {
    RandomSource rng(23);
    int agree = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const int r = rng.integer(1, 3);
      auto low_rank = [&](int k) { return ComplexMatrix(rng.complex_gaussian(4, k) * rng.complex_gaussian(k, 4)); };
      const auto rec = douglas::conjecture_probe(low_rank(1), low_rank(1), low_rank(r), low_rank(1), tol);
      agree += rec.ranges_included == rec.majorized ? 1 : 0;
    }
    d = std::to_string(agree) + "/20 agree";
    return agree == 20;
  });

  add("parallel_sum_formulas_agree", [&](std::string& d) {
    const auto res = parallel::parallel_sum(HermitianMatrix::diagonal({1.0, 2.0, 0.0}),
                                            HermitianMatrix::diagonal({3.0, 0.0, 0.0}), tol);
    d = "agreement residual " + num(res.agreement_residual);
    return close(res.value.matrix(), HermitianMatrix::diagonal({0.75, 0.0, 0.0}).matrix(), 1e-14);
  });

  add("a_adjoint_exists_iff_range_condition", [&](std::string& d) {
    const HermitianMatrix a = HermitianMatrix::diagonal({1.0, 0.0});
    const auto none = douglas::a_adjoint(mat2(0, 1, 0, 0), a, tol);
    const auto some = douglas::a_adjoint(mat2(1, 0, 1, 0), a, tol);
    d = std::string("escaping T: ") + (none ? "adjoint" : "none") + ", invariant T: " + (some ? "adjoint" : "none");
    return !none && some.has_value();
  });

  return out;
}

}  // namespace blockpos::gallery
