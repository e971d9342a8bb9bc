#include "sskit/suites.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  sskit::RunConfig cfg;
  if (const char* env = std::getenv("SSKIT_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);

  CLI::App app{"Numerical verification of shifted symplectic structures on Lie groupoids"};
  app.require_subcommand(1);
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite, json_out;
  bool quiet = false;
  verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(sskit::suite_names()));
  verify->add_option("--algebra", cfg.algebra, "built-in algebra or JSON path");
  verify->add_option("--triple", cfg.triple, "built-in Manin triple or JSON path");
  verify->add_option("--grid", cfg.grid, "grid resolution R (loop: multiple of 6)")->check(CLI::PositiveNumber);
  verify->add_option("--fd-step", cfg.fd_step, "finite-difference step")->check(CLI::PositiveNumber);
  verify->add_option("--samples", cfg.samples, "random samples per check")->check(CLI::PositiveNumber);
  verify->add_option("--seed", cfg.seed, "base seed (default 1 or $SSKIT_SEED)");
  verify->add_option("--tol-scale", cfg.tol_scale, "multiply every absolute tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--fuzz", cfg.fuzz, "number of words for the simplicial fuzz")->check(CLI::NonNegativeNumber);
  verify->add_option("--json", json_out, "write the JSON report here ('-' for stdout)");
  verify->add_flag("--quiet", quiet, "no per-check summary");
  CLI11_PARSE(app, argc, argv);

  try {
    const sskit::VerificationReport rep = sskit::run_suite(suite, cfg);
    if (!quiet) std::cerr << rep.summary();
    if (json_out == "-") {
      std::cout << rep.to_json().dump(2) << "\n";
    } else if (!json_out.empty()) {
      std::ofstream out(json_out);
      if (!out) {
        std::cerr << "cannot write " << json_out << "\n";
        return 2;
      }
      out << rep.to_json().dump(2) << "\n";
    }
    return rep.passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
