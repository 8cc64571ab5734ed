#include <CLI11.hpp>

#include <iostream>

#include "sgwe/acceptance.hpp"
#include "sgwe/error.hpp"
#include "sgwe/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite: one line per criterion"};
  std::string config, out = "acceptance_out";
  int workers = 1;
  app.add_option("--config", config, "run configuration")->required();
  app.add_option("--out", out, "output directory");
  app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  try {
    sgwe::AcceptanceOptions opt;
    opt.config = sgwe::RunConfig::from_json(sgwe::read_json(config));
    opt.out_dir = out;
    opt.workers = workers;
    const auto rep = sgwe::run_acceptance(
        opt, [](const sgwe::CriterionResult& r) { std::cout << sgwe::format_result(r) << std::endl; });
    std::cout << (rep.all_pass ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED") << std::endl;
    return rep.all_pass ? 0 : 1;
  } catch (const sgwe::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
