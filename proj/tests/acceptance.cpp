// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "blockpos/block_positivity.hpp"
#include "blockpos/core_linalg.hpp"
#include "blockpos/douglas.hpp"
#include "blockpos/gallery.hpp"
#include "blockpos/matrix_io.hpp"
#include "blockpos/parallel_sum.hpp"
#include "blockpos/random.hpp"
#include "test_support.hpp"

#ifndef BLOCKPOS_CLI_PATH
#error "BLOCKPOS_CLI_PATH must point at the command line binary"
#endif

namespace {

using namespace blockpos;
using namespace blockpos::testing;
namespace fs = std::filesystem;

// Pinned tolerances.
constexpr double kRouteTol = 1e-8;
constexpr int kRouteBlocks = 10000;
constexpr double kRouteSeconds = 60.0;
constexpr int kRouteSamples = 32;
constexpr double kPropertyTol = 1e-8;
constexpr double kBisectionTol = 1e-6;
constexpr double kNormTol = 1e-12;
constexpr double kScalarTol = 1e-12;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

// ---------------------------------------------------------------------------

block::Block2x2 route_instance(RandomSource& rng, int i, Index n, const Tolerances& tol) {
  switch (i % 8) {
    case 0: return gram_block(rng, n, 2 * n + 1);
    case 1: return gram_block(rng, n, rng.integer(1, static_cast<int>(2 * n - 1)));
    case 2: return hermitian_block(rng, n);
    case 3: return range_block(rng, n, rng.uniform(0.2, 1.0), tol);
    case 4: return range_block(rng, n, rng.uniform(1.3, 3.0), tol);
    case 5: return escaping_block(rng, n);
    case 6: return hermitian_x_block(rng, n, true, tol);
    default: return hermitian_x_block(rng, n, false, tol);
  }
}

Outcome route_agreement() {
  const Tolerances tol = Tolerances::uniform(kRouteTol);
  RandomSource rng(1001);
  int disagreements = 0;
  int positives = 0;
  int route_runs = 0;
  std::string first;
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < kRouteBlocks; ++i) {
    const Index n = 1 + (i / 8) % 8;
    const block::Block2x2 b = route_instance(rng, i, n, tol);
    const block::PositivityCertificate c = block::certify_all(b, tol, static_cast<std::uint64_t>(i), kRouteSamples);
    positives += c.verdict ? 1 : 0;
    for (const auto& r : c.routes) route_runs += r.status != block::RouteStatus::NotApplicable ? 1 : 0;
    if (!c.routes_agree) {
      if (disagreements++ == 0) {
        first = "block " + std::to_string(i) + ":";
        for (const auto& r : c.routes) first += " " + r.name + "=" + std::string(block::to_string(r.status));
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Outcome o;
  o.passed = disagreements == 0 && secs < kRouteSeconds;
  o.detail = std::to_string(kRouteBlocks) + " blocks (" + std::to_string(positives) + " PSD), " +
             std::to_string(route_runs) + " route runs, " + std::to_string(disagreements) +
             " disagreements, " + std::to_string(secs).substr(0, 5) + " s" + (first.empty() ? "" : "; " + first);
  return o;
}

// ---------------------------------------------------------------------------

struct PlantedPair {
  ComplexMatrix a;
  ComplexMatrix b;
};

std::vector<PlantedPair> planted_corpus(int count) {
  RandomSource rng(2002);
  std::vector<PlantedPair> out;
  for (int i = 0; i < count; ++i) {
    const Index m = rng.integer(1, 6);
    const Index k = rng.integer(1, 6);
    const Index p = rng.integer(1, 6);
    const Index r = rng.integer(0, static_cast<int>(std::min(m, k)));
    const ComplexMatrix b = random_rank(rng, m, k, r);
    out.push_back({b * rng.complex_gaussian(k, p), b});
  }
  return out;
}

Outcome douglas_property_a() {
  const Tolerances tol;
  Tolerances oracle_tol;
  oracle_tol.psd_tol = 1e-13;
  double worst_spectral = 0.0;
  double worst_bisection = 0.0;
  int failures = 0;
  for (const PlantedPair& pp : planted_corpus(1000)) {
    const douglas::DouglasSolution s = douglas::douglas_solve(pp.a, pp.b, tol);
    const double mu = douglas::majorization_constant(pp.a, pp.b, tol);
    const double bis = bisection_majorization(pp.a, pp.b, std::max(1.0, s.norm_sq), oracle_tol, 1e-8);
    const double scale = std::max(1.0, mu);
    const double e1 = std::abs(s.norm_sq - mu) / scale;
    const double e2 = std::abs(bis - mu) / scale;
    worst_spectral = std::max(worst_spectral, e1);
    worst_bisection = std::max(worst_bisection, e2);
    if (!(e1 <= kPropertyTol) || !(e2 <= kBisectionTol)) ++failures;
  }
  return {failures == 0, "1000 planted pairs; max |norm_sq - mu|/max(1,mu) = " + fmt(worst_spectral) +
                             ", max bisection gap = " + fmt(worst_bisection)};
}

Outcome douglas_properties_bc() {
  const Tolerances tol;
  double worst_b = 0.0;
  double worst_c = 0.0;
  for (const PlantedPair& pp : planted_corpus(1000)) {
    const douglas::DouglasSolution s = douglas::douglas_solve(pp.a, pp.b, tol);
    const ComplexMatrix cs = s.C.adjoint();
    // (b): N(C) = N(A), as equality of the adjoint range projectors.
    worst_b = std::max(worst_b, diff_norm(qr_range_projector(cs), qr_range_projector(pp.a.adjoint())));
    // (c): R(C) inside R(B*).
    const ComplexMatrix pbs = qr_range_projector(pp.b.adjoint());
    const ComplexMatrix escape = (ComplexMatrix::Identity(pbs.rows(), pbs.cols()) - pbs) * s.C;
    worst_c = std::max(worst_c, op_norm(escape) / std::max(1.0, op_norm(s.C)));
  }
  return {worst_b <= kPropertyTol && worst_c <= kPropertyTol,
          "max projector gap (b) = " + fmt(worst_b) + ", max range escape (c) = " + fmt(worst_c)};
}

// ---------------------------------------------------------------------------

Outcome partial_isometry_gallery() {
  const Tolerances tol;
  const block::Block2x2 b(HermitianMatrix::diagonal({2.0, 1.0}), ComplexMatrix::Identity(2, 2),
                          HermitianMatrix::diagonal({1.0, 0.5}));
  ComplexMatrix swap = ComplexMatrix::Zero(2, 2);
  swap(0, 1) = swap(1, 0) = 1.0;
  const bool bound = block::partial_isometry_bound_holds(b, swap, tol);
  const double lam = *block::certify_eig(b, tol).min_eigenvalue;
  const double gap = std::abs(lam - gallery::kPartialIsometryMinEigenvalue);
  bool demo_ok = true;
  try {
    const auto rec = block::partial_isometry_converse_demo(tol);
    demo_ok = rec.bound_holds && !rec.block_positive;
  } catch (const Error&) {
    demo_ok = false;
  }
  return {bound && lam < 0.0 && gap <= gallery::kFrozenTolerance && demo_ok,
          "bound " + std::string(bound ? "true" : "false") + ", min eigenvalue " + std::to_string(lam) +
              ", frozen gap " + fmt(gap)};
}

Outcome hadamard_gallery() {
  const Tolerances tol;
  ComplexMatrix y(2, 2), z(2, 2);
  y << 2, 2, 2, 1;
  z << 1, 3, 3, 3;
  const block::HadamardRecord r = block::hadamard_block(HermitianMatrix(y), HermitianMatrix(z), tol);
  const double gap = std::abs(r.abs_gap_min_eigenvalue - gallery::kHadamardAbsGapMinEigenvalue);
  return {r.plus_bound && r.minus_bound && !r.abs_bound && gap <= gallery::kFrozenTolerance,
          "+bound " + std::string(r.plus_bound ? "true" : "false") + ", -bound " +
              (r.minus_bound ? "true" : "false") + ", |.| bound " + (r.abs_bound ? "true" : "false") +
              ", gap eigenvalue " + std::to_string(r.abs_gap_min_eigenvalue) + ", frozen gap " + fmt(gap)};
}

Outcome symmetrized_gallery() {
  const Tolerances tol;
  const Index n = 2;
  const block::Block2x2 b(HermitianMatrix::identity(n) * 2.0, ComplexMatrix::Zero(n, n),
                          HermitianMatrix::identity(n) * -1.0);
  const bool m_psd = block::certify_eig(b, tol).verdict;
  const bool sym = block::symmetrized_certify(b, tol);
  const block::NormCertificate nc = block::selfadjoint_norm_certify(b, tol);
  const double gap = std::abs(nc.operand_norm - 3.0);
  return {!m_psd && sym && !nc.verdict && gap <= kNormTol,
          "M psd " + std::string(m_psd ? "true" : "false") + ", M+UMU* psd " + (sym ? "true" : "false") +
              ", operand norm " + std::to_string(nc.operand_norm) + " (gap " + fmt(gap) + ")"};
}

// ---------------------------------------------------------------------------

Outcome range_identities() {
  const Tolerances tol;
  RandomSource rng(7007);
  double worst_diamond = 0.0;
  double worst_fw = 0.0;
  double worst_dd = 0.0;
  bool dd_flag = true;
  for (int i = 0; i < 1000; ++i) {
    const Index m = rng.integer(1, 8);
    const Index k = rng.integer(1, 8);
    const ComplexMatrix a = random_rank(rng, m, k, rng.integer(0, static_cast<int>(std::min(m, k))));
    const HermitianMatrix root = psd_sqrt(HermitianMatrix(ComplexMatrix(a * a.adjoint())), tol);
    worst_diamond = std::max(worst_diamond, diff_norm(range_projector(a, tol).matrix(),
                                                      range_projector(root.matrix(), tol).matrix()));

    const Index k2 = rng.integer(1, 8);
    const ComplexMatrix b = random_rank(rng, m, k2, rng.integer(0, static_cast<int>(std::min(m, k2))));
    const HermitianMatrix s = douglas::range_sum_root(a, b, tol);
    ComplexMatrix stacked(m, k + k2);
    stacked << a, b;
    worst_fw = std::max(worst_fw, diff_norm(range_projector(s.matrix(), tol).matrix(), qr_range_projector(stacked)));

    const HermitianMatrix pa = random_psd(rng, m, rng.integer(0, static_cast<int>(m)));
    const HermitianMatrix pb = random_psd(rng, m, rng.integer(0, static_cast<int>(m)));
    dd_flag = parallel::range_sum_sqrt_identity(pa, pb, tol) && dd_flag;
    ComplexMatrix roots(m, 2 * m);
    roots << psd_sqrt(pa, tol).matrix(), psd_sqrt(pb, tol).matrix();
    worst_dd = std::max(worst_dd, diff_norm(qr_range_projector(roots),
                                            range_projector(psd_sqrt(pa + pb, tol).matrix(), tol).matrix()));
  }
  return {worst_diamond <= kPropertyTol && worst_fw <= kPropertyTol && worst_dd <= kPropertyTol && dd_flag,
          "1000 instances each; R(A)=R((AA*)^1/2) gap " + fmt(worst_diamond) + ", range-sum gap " + fmt(worst_fw) +
              ", sqrt range-sum gap " + fmt(worst_dd)};
}

Outcome parallel_agreement() {
  const Tolerances tol;
  RandomSource rng(8008);
  double worst = 0.0;
  int deficient = 0;
  for (int i = 0; i < 1000; ++i) {
    const Index n = rng.integer(1, 8);
    const Index ra = rng.integer(0, static_cast<int>(n));
    const Index rb = rng.integer(0, static_cast<int>(n));
    deficient += (ra < n || rb < n) ? 1 : 0;
    const parallel::ParallelSumResult r = parallel::parallel_sum(random_psd(rng, n, ra), random_psd(rng, n, rb), tol);
    worst = std::max(worst, r.agreement_residual);
  }
  double worst_scalar = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double a = rng.uniform(0.01, 10.0);
    const double b = rng.uniform(0.01, 10.0);
    const parallel::ParallelSumResult r =
        parallel::parallel_sum(HermitianMatrix::diagonal({a}), HermitianMatrix::diagonal({b}), tol);
    worst_scalar = std::max(worst_scalar, std::abs(r.value(0, 0).real() - a * b / (a + b)));
  }
  return {worst <= kPropertyTol && worst_scalar <= kScalarTol,
          "1000 pairs (" + std::to_string(deficient) + " rank-deficient), max residual " + fmt(worst) +
              "; scalar max error " + fmt(worst_scalar)};
}

Outcome dilation_unitarity() {
  const Tolerances tol;
  RandomSource rng(9009);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Index n = rng.integer(1, 16);
    RealVector s(n);
    for (Index j = 0; j < n; ++j) s(j) = rng.uniform(0.0, 1.0);
    if (i % 4 == 0) s(0) = 1.0;  // norm exactly one
    if (i % 5 == 0) s(n - 1) = 0.0;
    const ComplexMatrix g = block::unitary_dilation(rng.with_singular_values(n, n, s), tol);
    const ComplexMatrix id = ComplexMatrix::Identity(2 * n, 2 * n);
    worst = std::max({worst, diff_norm(ComplexMatrix(g.adjoint() * g), id), diff_norm(ComplexMatrix(g * g.adjoint()), id)});
  }
  return {worst <= kPropertyTol, "1000 contractions, n <= 16, max ||G*G - I|| = " + fmt(worst)};
}

Outcome offdiag() {
  const Tolerances tol;
  RandomSource rng(1010);
  std::vector<double> grid;
  for (int t = 1; t <= 9; ++t) grid.push_back(t / 10.0);
  int failures = 0;
  for (int i = 0; i < 500; ++i) {
    const Index n = rng.integer(1, 8);
    const block::Block2x2 b = hermitian_x_block(rng, n, true, tol);
    if (!block::offdiag_bounds(b, grid, tol)) ++failures;
  }
  return {failures == 0, "500 PSD blocks with Hermitian X, t in {0.1..0.9}: " + std::to_string(failures) + " failures"};
}

// ---------------------------------------------------------------------------

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BLOCKPOS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_contract() {
  const fs::path dir = fs::temp_directory_path() / ("blockpos_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  std::ofstream(dir / "corrupt.json") << "{\"A\": {\"rows\": 2, \"cols\": 2, \"re\": [[1, 0], [0";

  const block::Block2x2 singular(HermitianMatrix::diagonal({1.0, 0.0}), ComplexMatrix::Zero(2, 2),
                                 HermitianMatrix::identity(2));
  std::ofstream(dir / "singular.json") << io::block_to_json(singular).dump();

  RandomSource rng(1111);
  std::ofstream(dir / "random.json") << io::block_to_json(hermitian_block(rng, 3)).dump();

  const int gallery = run_cli("gallery");
  const int corrupt = run_cli("certify " + (dir / "corrupt.json").string());
  const int schur = run_cli("certify --route schur " + (dir / "singular.json").string());
  const std::string common = "--seed 42 --samples 200 certify " + (dir / "random.json").string() + " " +
                             (dir / "singular.json").string() + " --out ";
  const int r1 = run_cli(common + (dir / "r1.json").string());
  const int r2 = run_cli(common + (dir / "r2.json").string());
  const std::string a = slurp(dir / "r1.json");
  const bool identical = !a.empty() && a == slurp(dir / "r2.json") && r1 == r2;
  fs::remove_all(dir);

  return {gallery == 0 && corrupt == 2 && schur == 3 && identical,
          "gallery exit " + std::to_string(gallery) + ", corrupted input exit " + std::to_string(corrupt) +
              ", schur on singular A exit " + std::to_string(schur) + ", seeded reports " +
              (identical ? "byte-identical" : "differ")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"route agreement", route_agreement},
      {"douglas norm equals majorization constant", douglas_property_a},
      {"douglas null space and range properties", douglas_properties_bc},
      {"partial isometry counterexample", partial_isometry_gallery},
      {"hadamard counterexample", hadamard_gallery},
      {"symmetrized remark", symmetrized_gallery},
      {"range identities", range_identities},
      {"parallel sum agreement", parallel_agreement},
      {"dilation unitarity", dilation_unitarity},
      {"offdiagonal t-bounds", offdiag},
      {"cli contract", cli_contract},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.passed ? 0 : 1;
    std::cout << (o.passed ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].name << ": " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
