// Batch front end: certify blocks, solve Douglas and AXB = C problems, form
// parallel sums and dilations, and replay the counterexample gallery.

#include <iostream>

#include "CLI11.hpp"

#include "blockpos/cli.hpp"

int main(int argc, char** argv) {
  using namespace blockpos;

  CLI::App app{"Positivity certificates for 2x2 block operator matrices"};
  app.require_subcommand(1);
  app.fallthrough();

  double tol = -1.0;
  cli::RunConfig cfg;
  std::string format = "json";

  app.add_option("--tol", tol, "Override psd_tol, rank_tol and eq_tol (default 1e-9)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", cfg.seed, "Seed for randomized checks")->capture_default_str();
  app.add_option("--samples", cfg.samples, "Random samples for sampling checks")
      ->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--out", cfg.output, "Write the report here instead of stdout");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json"}))->capture_default_str();

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"certify", "Certify positivity of block files {A, X, B}"},
      {"douglas", "Douglas solution of A = BC (inputs: A B)"},
      {"axb", "Solve AXB = C (inputs: A B C)"},
      {"parallel", "Parallel sum of PSD matrices (inputs: A B)"},
      {"dilate", "Unitary dilation of a contraction (input: K)"},
      {"gallery", "Reproduce the counterexample gallery"},
  };
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    if (std::string(s.name) != "gallery") sub->add_option("inputs", cfg.input_paths, "Input JSON files");
    if (std::string(s.name) == "certify") {
      sub->add_option("--route", cfg.route,
                      "Route: all, eig, schur, schur_flipped, factor, contraction, gram, "
                      "gram_dilation, cauchy_schwarz, selfadjoint_norm, equal_diagonal")
          ->capture_default_str();
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kMalformedInput;
  }

  if (tol >= 0.0) cfg.tol_override = Tolerances::uniform(tol);
  cfg.subcommand = *cli::parse_subcommand(app.get_subcommands().front()->get_name());
  return cli::run(cfg, std::cout, std::cerr);
}
