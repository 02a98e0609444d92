#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "blockpos/cli.hpp"
#include "blockpos/matrix_io.hpp"
#include "blockpos/random.hpp"

namespace {

using namespace blockpos;
using io::json;
namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("blockpos_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const json& j) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << j.dump();
    return p.string();
  }

  std::string write_text(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static json block_json(const ComplexMatrix& a, const ComplexMatrix& x, const ComplexMatrix& b) {
    return {{"A", io::matrix_to_json(a)}, {"X", io::matrix_to_json(x)}, {"B", io::matrix_to_json(b)}};
  }

  int run(cli::Subcommand sub, std::vector<std::string> inputs, json* report = nullptr,
          const std::string& route = "all") {
    cli::RunConfig cfg;
    cfg.subcommand = sub;
    cfg.input_paths = std::move(inputs);
    cfg.route = route;
    cfg.samples = 200;
    std::ostringstream out, err;
    const int code = cli::run(cfg, out, err);
    if (report) *report = json::parse(out.str());
    return code;
  }

  fs::path dir_;
};

ComplexMatrix diag2(double a, double b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

TEST_F(CliTest, CertifyIdentityBlock) {
  const auto p = write("id.json", block_json(diag2(1, 1), diag2(0, 0), diag2(1, 1)));
  json r;
  EXPECT_EQ(run(cli::Subcommand::Certify, {p}, &r), cli::kPositive);
  const json& res = r["results"][0];
  EXPECT_TRUE(res["verdict"].get<bool>());
  EXPECT_TRUE(res["routes_agree"].get<bool>());
  for (const auto& route : res["routes"]) {
    EXPECT_TRUE(route["status"] == "positive" || route["status"] == "not_applicable") << route["name"];
  }
}

TEST_F(CliTest, CertifyPartialIsometryGallery) {
  json j = block_json(diag2(2, 1), diag2(1, 1), diag2(1, 0.5));
  ComplexMatrix swap = ComplexMatrix::Zero(2, 2);
  swap(0, 1) = swap(1, 0) = 1.0;
  j["U"] = io::matrix_to_json(swap);
  json r;
  EXPECT_EQ(run(cli::Subcommand::Certify, {write("pi.json", j)}, &r), cli::kNegative);
  const json& res = r["results"][0];
  EXPECT_FALSE(res["verdict"].get<bool>());
  EXPECT_TRUE(res["partial_isometry_bound"]["holds"].get<bool>());
  EXPECT_EQ(res["partial_isometry_bound"]["U_source"], "input");
  EXPECT_LT(res["min_eigenvalue"].get<double>(), 0.0);
}

TEST_F(CliTest, MalformedInputsExitTwo) {
  EXPECT_EQ(run(cli::Subcommand::Certify, {write_text("bad.json", "{\"A\": [")}), cli::kMalformedInput);
  EXPECT_EQ(run(cli::Subcommand::Certify, {(dir_ / "missing.json").string()}), cli::kMalformedInput);
  EXPECT_EQ(run(cli::Subcommand::Certify, {}), cli::kMalformedInput);
  ComplexMatrix upper = diag2(1, 1);
  upper(0, 1) = 1.0;
  const auto asym = write("asym.json", block_json(upper, diag2(0, 0), diag2(1, 1)));
  EXPECT_EQ(run(cli::Subcommand::Certify, {asym}), cli::kMalformedInput);
  EXPECT_EQ(run(cli::Subcommand::Douglas, {write("one.json", io::matrix_to_json(diag2(1, 1)))}), cli::kMalformedInput);
}

TEST_F(CliTest, SingleRoutePreconditionExitsThree) {
  const auto p = write("sing.json", block_json(diag2(1, 0), diag2(0, 0), diag2(1, 1)));
  EXPECT_EQ(run(cli::Subcommand::Certify, {p}, nullptr, "schur"), cli::kPrecondition);
  EXPECT_EQ(run(cli::Subcommand::Certify, {p}, nullptr, "schur_flipped"), cli::kPositive);
  EXPECT_EQ(run(cli::Subcommand::Certify, {p}, nullptr, "nonsense"), cli::kMalformedInput);
}

TEST_F(CliTest, SingleRoutesMatchOracle) {
  RandomSource rng(3);
  const ComplexMatrix y = rng.complex_gaussian(5, 4);
  const ComplexMatrix m = y.adjoint() * y;
  const auto p = write("gram.json", block_json(m.topLeftCorner(2, 2), m.topRightCorner(2, 2), m.bottomRightCorner(2, 2)));
  const auto g = write("gal.json", block_json(diag2(2, 1), diag2(1, 1), diag2(1, 0.5)));
  for (const char* route : {"eig", "schur", "schur_flipped", "factor", "contraction", "gram", "gram_dilation",
                            "cauchy_schwarz"}) {
    EXPECT_EQ(run(cli::Subcommand::Certify, {p}, nullptr, route), cli::kPositive) << route;
    EXPECT_EQ(run(cli::Subcommand::Certify, {g}, nullptr, route), cli::kNegative) << route;
  }
  const auto remark = write("remark.json", block_json(diag2(2, 2), diag2(0, 0), diag2(-1, -1)));
  json r;
  EXPECT_EQ(run(cli::Subcommand::Certify, {remark}, &r, "selfadjoint_norm"), cli::kNegative);
  EXPECT_NEAR(r["results"][0]["detail"]["operand_norm"].get<double>(), 3.0, 1e-12);
}

TEST_F(CliTest, BatchReportsInInputOrderWithWorstCode) {
  const auto good = write("good.json", block_json(diag2(1, 1), diag2(0, 0), diag2(1, 1)));
  const auto bad = write("neg.json", block_json(diag2(2, 1), diag2(1, 1), diag2(1, 0.5)));
  json r;
  EXPECT_EQ(run(cli::Subcommand::Certify, {good, bad, good}, &r), cli::kNegative);
  ASSERT_EQ(r["results"].size(), 3u);
  EXPECT_EQ(r["results"][0]["input"], good);
  EXPECT_EQ(r["results"][1]["input"], bad);
  EXPECT_EQ(r["results"][1]["exit_code"], 1);
}

TEST_F(CliTest, DouglasAndAxb) {
  const auto id = write("id.json", io::matrix_to_json(diag2(1, 1)));
  const auto e1 = write("e1.json", io::matrix_to_json(diag2(1, 0)));
  const auto e2 = write("e2.json", io::matrix_to_json(diag2(0, 1)));
  json r;
  EXPECT_EQ(run(cli::Subcommand::Douglas, {e1, id}, &r), cli::kPositive);
  EXPECT_DOUBLE_EQ(r["solution"]["norm_sq"].get<double>(), 1.0);
  EXPECT_EQ(run(cli::Subcommand::Douglas, {id, e1}, &r), cli::kNegative);
  EXPECT_EQ(r["majorization_constant"], "inf");
  EXPECT_EQ(run(cli::Subcommand::Axb, {id, id, e2}), cli::kPositive);
  EXPECT_EQ(run(cli::Subcommand::Axb, {e1, id, e2}), cli::kNegative);
}

TEST_F(CliTest, ParallelAndDilate) {
  const auto id = write("id.json", io::matrix_to_json(diag2(1, 1)));
  const auto neg = write("neg.json", io::matrix_to_json(diag2(1, -1)));
  json r;
  EXPECT_EQ(run(cli::Subcommand::Parallel, {id, id}, &r), cli::kPositive);
  EXPECT_DOUBLE_EQ(r["value"]["re"][0][0].get<double>(), 0.5);
  EXPECT_EQ(run(cli::Subcommand::Parallel, {id, neg}), cli::kPrecondition);
  EXPECT_EQ(run(cli::Subcommand::Dilate, {write("k.json", io::matrix_to_json(diag2(0.5, 0.0)))}, &r), cli::kPositive);
  EXPECT_LE(r["unitarity_residual"].get<double>(), 1e-12);
  EXPECT_EQ(run(cli::Subcommand::Dilate, {write("big.json", io::matrix_to_json(diag2(2.0, 0.0)))}), cli::kPrecondition);
}

TEST_F(CliTest, GalleryPasses) {
  json r;
  EXPECT_EQ(run(cli::Subcommand::Gallery, {}, &r), cli::kPositive);
  EXPECT_TRUE(r["all_passed"].get<bool>());
  for (const auto& c : r["checks"]) EXPECT_TRUE(c["passed"].get<bool>()) << c["name"];
}

TEST_F(CliTest, SeededRunsAreByteIdentical) {
  RandomSource rng(4);
  const auto p = write("h.json", block_json(rng.hermitian(3).matrix(), rng.complex_gaussian(3, 3), rng.hermitian(3).matrix()));
  cli::RunConfig cfg;
  cfg.subcommand = cli::Subcommand::Certify;
  cfg.input_paths = {p};
  cfg.seed = 99;
  std::ostringstream a, b, err;
  const int c1 = cli::run(cfg, a, err);
  const int c2 = cli::run(cfg, b, err);
  EXPECT_EQ(c1, c2);
  EXPECT_EQ(a.str(), b.str());
}

int shell(const std::string& args) {
  const int status = std::system((std::string(BLOCKPOS_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliBinary, ArgumentHandling) {
  EXPECT_EQ(shell("--help"), 0);
  EXPECT_EQ(shell(""), 2);
  EXPECT_EQ(shell("frobnicate"), 2);
  EXPECT_EQ(shell("--format xml gallery"), 2);
  EXPECT_EQ(shell("--samples 0 gallery"), 2);
  EXPECT_EQ(shell("gallery --tol 1e-9 --seed 3"), 0);
}

}  // namespace
