#include "blockpos/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include "blockpos/block_positivity.hpp"
#include "blockpos/douglas.hpp"
#include "blockpos/gallery.hpp"
#include "blockpos/matrix_io.hpp"
#include "blockpos/parallel_sum.hpp"

namespace blockpos::cli {

namespace {

using io::json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedInput:
    case ErrorCode::DimensionMismatch:
      return kMalformedInput;
    case ErrorCode::PreconditionFailed:
    case ErrorCode::NotPSD:
    case ErrorCode::NotContraction:
    case ErrorCode::Singular:
      return kPrecondition;
    case ErrorCode::NotPositive:
    case ErrorCode::RangeNotIncluded:
    case ErrorCode::Unsolvable:
    case ErrorCode::GalleryBroken:
      return kNegative;
    case ErrorCode::InternalDisagreement:
    case ErrorCode::NonConvergence:
      return kDisagreement;
  }
  return kDisagreement;
}

json error_json(const Error& e) {
  return {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
}

json tolerances_json(const Tolerances& t) {
  return {{"psd_tol", t.psd_tol}, {"rank_tol", t.rank_tol}, {"eq_tol", t.eq_tol}};
}

bool require_inputs(const RunConfig& cfg, std::size_t count, std::ostream& err) {
  if (cfg.input_paths.size() != count) {
    err << to_string(cfg.subcommand) << " expects " << count << " input file(s), got "
        << cfg.input_paths.size() << "\n";
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// certify

const std::map<std::string, std::string>& route_aliases() {
  // CLI route name -> route name used in certificates.
  static const std::map<std::string, std::string> names = {
      {"eig", "eigenvalue"},       {"schur", "schur"},
      {"schur_flipped", "schur_flipped"}, {"factor", "factor"},
      {"contraction", "contraction"},     {"gram", "gram_sqrt"},
      {"gram_dilation", "gram_dilation"}, {"cauchy_schwarz", "cauchy_schwarz"},
      {"selfadjoint_norm", "selfadjoint_norm"}, {"equal_diagonal", "equal_diagonal"},
  };
  return names;
}

// Runs a single route without applicability filtering, so preconditions surface as errors.
bool run_single_route(const std::string& route, const block::Block2x2& blk, const Tolerances& tol,
                      const RunConfig& cfg, json& detail) {
  if (route == "eig") return block::certify_eig(blk, tol).verdict;
  if (route == "schur") {
    const auto c = block::schur_certify(blk, tol);
    detail["schur_complement"] = io::matrix_to_json(c.schur_complement->matrix());
    return c.verdict;
  }
  if (route == "schur_flipped") {
    const auto c = block::schur_certify_flipped(blk, tol);
    detail["schur_complement"] = io::matrix_to_json(c.schur_complement->matrix());
    return c.verdict;
  }
  if (route == "factor") {
    detail["C"] = io::matrix_to_json(block::factor_certify(blk, tol));
    return true;
  }
  if (route == "contraction") {
    detail["contraction_K"] = io::matrix_to_json(block::contraction_certify(blk, tol));
    return true;
  }
  if (route == "gram") {
    const auto g = block::gram_factorize(blk, tol);
    detail["gram_Y1"] = io::matrix_to_json(g.Y1);
    detail["gram_Y2"] = io::matrix_to_json(g.Y2);
    return true;
  }
  if (route == "gram_dilation") {
    const auto g = block::gram_factorize_dilation(blk, tol);
    detail["gram_Y1"] = io::matrix_to_json(g.Y1);
    detail["gram_Y2"] = io::matrix_to_json(g.Y2);
    return true;
  }
  if (route == "cauchy_schwarz") {
    return !block::cauchy_schwarz_falsify(blk, cfg.samples, cfg.seed, tol).has_value();
  }
  if (route == "selfadjoint_norm") {
    const auto nc = block::selfadjoint_norm_certify(blk, tol);
    detail["operand_norm"] = nc.operand_norm;
    return nc.verdict;
  }
  if (route == "equal_diagonal") {
    const double gap = op_norm(ComplexMatrix(blk.A().matrix() - blk.B().matrix()));
    if (gap > tol.eq_tol * std::max(1.0, op_norm(blk.A()))) {
      throw Error(ErrorCode::PreconditionFailed, "equal-diagonal route needs A = B");
    }
    return block::equal_diagonal_certify(blk.A(), HermitianMatrix::checked(blk.X(), tol), tol);
  }
  throw Error(ErrorCode::MalformedInput, "unknown route " + route);
}

json residuals_json(const block::Block2x2& blk, const block::PositivityCertificate& cert, const Tolerances& tol) {
  json r = json::object();
  if (cert.contraction_K) {
    const ComplexMatrix rebuilt = psd_sqrt(blk.A(), tol).matrix() * *cert.contraction_K * psd_sqrt(blk.B(), tol).matrix();
    r["contraction_reconstruction"] = op_norm(ComplexMatrix(rebuilt - blk.X()));
    r["contraction_norm"] = op_norm(*cert.contraction_K);
  }
  if (cert.gram_Y1 && cert.gram_Y2) {
    const ComplexMatrix& y1 = *cert.gram_Y1;
    const ComplexMatrix& y2 = *cert.gram_Y2;
    r["gram_A"] = op_norm(ComplexMatrix(y1.adjoint() * y1 - blk.A().matrix()));
    r["gram_B"] = op_norm(ComplexMatrix(y2.adjoint() * y2 - blk.B().matrix()));
    r["gram_X"] = op_norm(ComplexMatrix(y1.adjoint() * y2 - blk.X()));
  }
  return r;
}

int certify_one(const std::string& path, const RunConfig& cfg, const Tolerances& tol, json& report) {
  report["input"] = path;
  const io::BlockInput in = io::block_from_json(io::load_json_file(path), tol);
  const block::Block2x2& blk = in.block;

  if (cfg.route == "all") {
    const auto cert = block::certify_all(blk, tol, cfg.seed, cfg.samples, in.U);
    report["verdict"] = cert.verdict;
    report["min_eigenvalue"] = *cert.min_eigenvalue;
    report["routes_agree"] = cert.routes_agree;
    json routes = json::array();
    for (const auto& r : cert.routes) {
      routes.push_back({{"name", r.name}, {"status", std::string(block::to_string(r.status))}, {"detail", r.detail}});
    }
    report["routes"] = std::move(routes);
    report["range_condition"] = cert.range_condition ? json(*cert.range_condition) : json(nullptr);
    if (cert.partial_isometry_bound) {
      report["partial_isometry_bound"] = {{"holds", *cert.partial_isometry_bound},
                                          {"U_source", in.U ? "input" : "polar"}};
    } else {
      report["partial_isometry_bound"] = nullptr;
    }
    if (cert.schur_complement) report["schur_complement"] = io::matrix_to_json(cert.schur_complement->matrix());
    if (cert.contraction_K) report["contraction_K"] = io::matrix_to_json(*cert.contraction_K);
    report["residuals"] = residuals_json(blk, cert, tol);
    if (!cert.routes_agree) return kDisagreement;
    return cert.verdict ? kPositive : kNegative;
  }

  if (!route_aliases().count(cfg.route)) throw Error(ErrorCode::MalformedInput, "unknown route " + cfg.route);
  const auto oracle = block::certify_eig(blk, tol);
  report["min_eigenvalue"] = *oracle.min_eigenvalue;
  report["route"] = cfg.route;
  json detail = json::object();
  bool verdict = false;
  try {
    verdict = run_single_route(cfg.route, blk, tol, cfg, detail);
  } catch (const Error& e) {
    if (exit_code_for(e.code()) != kNegative) throw;
    detail["reason"] = e.what();
    verdict = false;
  }
  report["verdict"] = verdict;
  report["detail"] = std::move(detail);
  report["routes_agree"] = verdict == oracle.verdict;
  if (verdict != oracle.verdict) return kDisagreement;
  return verdict ? kPositive : kNegative;
}

int run_certify(const RunConfig& cfg, const Tolerances& tol, json& report, std::ostream& err) {
  if (cfg.input_paths.empty()) {
    err << "certify expects at least one block file\n";
    return kMalformedInput;
  }
  report["route"] = cfg.route;
  json results = json::array();
  int worst = kPositive;
  for (const std::string& path : cfg.input_paths) {
    json one = json::object();
    int code = kPositive;
    try {
      code = certify_one(path, cfg, tol, one);
    } catch (const Error& e) {
      code = exit_code_for(e.code());
      one.update(error_json(e));
      err << path << ": " << e.what() << "\n";
    }
    one["exit_code"] = code;
    results.push_back(std::move(one));
    worst = std::max(worst, code);
  }
  report["results"] = std::move(results);
  return worst;
}

// ---------------------------------------------------------------------------
// the other subcommands

int run_douglas(const RunConfig& cfg, const Tolerances& tol, json& report, std::ostream& err) {
  if (!require_inputs(cfg, 2, err)) return kMalformedInput;
  const ComplexMatrix a = io::matrix_from_json(io::load_json_file(cfg.input_paths[0]));
  const ComplexMatrix b = io::matrix_from_json(io::load_json_file(cfg.input_paths[1]));
  if (a.rows() != b.rows()) throw Error(ErrorCode::MalformedInput, "A and B need equal row counts");
  const auto eq = douglas::equivalence_report(a, b, tol);
  report["range_inclusion"] = eq.range_inclusion;
  report["factorization_found"] = eq.factorization_found;
  report["majorization_constant"] = std::isfinite(eq.majorization_const) ? json(eq.majorization_const) : json("inf");
  try {
    const auto sol = douglas::douglas_solve(a, b, tol);
    report["solution"] = {{"C", io::matrix_to_json(sol.C)},
                          {"norm_sq", sol.norm_sq},
                          {"mu_inf", sol.mu_inf},
                          {"residual", sol.residual}};
    return kPositive;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::RangeNotIncluded) throw;
    report["solution"] = nullptr;
    report["reason"] = e.what();
    return kNegative;
  }
}

int run_axb(const RunConfig& cfg, const Tolerances& tol, json& report, std::ostream& err) {
  if (!require_inputs(cfg, 3, err)) return kMalformedInput;
  const ComplexMatrix a = io::matrix_from_json(io::load_json_file(cfg.input_paths[0]));
  const ComplexMatrix b = io::matrix_from_json(io::load_json_file(cfg.input_paths[1]));
  const ComplexMatrix c = io::matrix_from_json(io::load_json_file(cfg.input_paths[2]));
  if (a.rows() != c.rows() || b.cols() != c.cols()) {
    throw Error(ErrorCode::MalformedInput, "AXB = C shapes do not compose");
  }
  try {
    const ComplexMatrix x = douglas::solve_axb(a, b, c, tol);
    report["X"] = io::matrix_to_json(x);
    report["residual"] = op_norm(ComplexMatrix(a * x * b - c));
    return kPositive;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Unsolvable) throw;
    report["X"] = nullptr;
    report["reason"] = e.what();
    return kNegative;
  }
}

int run_parallel(const RunConfig& cfg, const Tolerances& tol, json& report, std::ostream& err) {
  if (!require_inputs(cfg, 2, err)) return kMalformedInput;
  const HermitianMatrix a = io::hermitian_from_json(io::load_json_file(cfg.input_paths[0]), tol);
  const HermitianMatrix b = io::hermitian_from_json(io::load_json_file(cfg.input_paths[1]), tol);
  if (a.dim() != b.dim()) throw Error(ErrorCode::MalformedInput, "A and B must share a size");
  const auto res = parallel::parallel_sum(a, b, tol);
  report["value"] = io::matrix_to_json(res.value.matrix());
  report["via_douglas"] = io::matrix_to_json(res.via_douglas.matrix());
  report["via_pinv"] = io::matrix_to_json(res.via_pinv.matrix());
  report["agreement_residual"] = res.agreement_residual;
  report["range_identity"] = parallel::range_sum_sqrt_identity(a, b, tol);
  return kPositive;
}

int run_dilate(const RunConfig& cfg, const Tolerances& tol, json& report, std::ostream& err) {
  if (!require_inputs(cfg, 1, err)) return kMalformedInput;
  const ComplexMatrix k = io::matrix_from_json(io::load_json_file(cfg.input_paths[0]));
  if (k.rows() != k.cols()) throw Error(ErrorCode::MalformedInput, "K must be square");
  const ComplexMatrix g = block::unitary_dilation(k, tol);
  const ComplexMatrix id = ComplexMatrix::Identity(g.rows(), g.cols());
  report["G"] = io::matrix_to_json(g);
  report["unitarity_residual"] = op_norm(ComplexMatrix(g.adjoint() * g - id));
  return kPositive;
}

int run_gallery(const Tolerances& tol, json& report) {
  const auto checks = gallery::run_gallery(tol);
  json arr = json::array();
  bool all = true;
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    all = all && c.passed;
  }
  report["checks"] = std::move(arr);
  report["all_passed"] = all;
  return all ? kPositive : kNegative;
}

}  // namespace

std::optional<Subcommand> parse_subcommand(const std::string& name) {
  static const std::map<std::string, Subcommand> table = {
      {"certify", Subcommand::Certify}, {"douglas", Subcommand::Douglas}, {"axb", Subcommand::Axb},
      {"parallel", Subcommand::Parallel}, {"dilate", Subcommand::Dilate}, {"gallery", Subcommand::Gallery},
  };
  const auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::string to_string(Subcommand s) {
  switch (s) {
    case Subcommand::Certify: return "certify";
    case Subcommand::Douglas: return "douglas";
    case Subcommand::Axb: return "axb";
    case Subcommand::Parallel: return "parallel";
    case Subcommand::Dilate: return "dilate";
    case Subcommand::Gallery: return "gallery";
  }
  return "unknown";
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Tolerances tol = config.tol_override.value_or(Tolerances{});
  if (config.samples < 1) {
    err << "--samples must be at least 1\n";
    return kMalformedInput;
  }
  try {
    tol.validate();
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kMalformedInput;
  }

  json report = {{"subcommand", to_string(config.subcommand)},
                 {"tolerances", tolerances_json(tol)},
                 {"seed", config.seed},
                 {"samples", config.samples}};
  int code = kPositive;
  try {
    switch (config.subcommand) {
      case Subcommand::Certify: code = run_certify(config, tol, report, err); break;
      case Subcommand::Douglas: code = run_douglas(config, tol, report, err); break;
      case Subcommand::Axb: code = run_axb(config, tol, report, err); break;
      case Subcommand::Parallel: code = run_parallel(config, tol, report, err); break;
      case Subcommand::Dilate: code = run_dilate(config, tol, report, err); break;
      case Subcommand::Gallery: code = run_gallery(tol, report); break;
    }
  } catch (const Error& e) {
    code = exit_code_for(e.code());
    report.update(error_json(e));
    err << e.what() << "\n";
  }
  report["exit_code"] = code;

  const std::string text = report.dump(2) + "\n";
  if (config.output.empty() || config.output == "-") {
    out << text;
  } else {
    std::ofstream file(config.output, std::ios::binary);
    if (!file) {
      err << "cannot write " << config.output << "\n";
      return kMalformedInput;
    }
    file << text;
  }
  return code;
}

}  // namespace blockpos::cli
