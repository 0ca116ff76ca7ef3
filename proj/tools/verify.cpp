// Runs a verification suite and writes one JSON report per run plus summary.txt.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "strata/suite.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Run Hardy/Rellich/Picone verification suites on stratified groups"};
  std::string suite_file, builtin, emit;
  std::size_t jobs = 1;
  bool allow_inconclusive = false, list = false;
  std::string out_dir;
  auto* suite_opt = app.add_option("--suite", suite_file, "suite description (JSON)")->check(CLI::ExistingFile);
  auto* builtin_opt = app.add_option("--builtin", builtin, "built-in suite: paper-full, identities-only, smoke");
  suite_opt->excludes(builtin_opt);
  app.add_option("--jobs", jobs, "runs executed concurrently")->check(CLI::PositiveNumber);
  app.add_flag("--allow-inconclusive", allow_inconclusive, "count inconclusive verdicts as passing");
  app.add_option("--out", out_dir, "report directory (default: $STRATA_OUT_DIR or ./strata-reports)");
  app.add_option("--emit-builtin", emit, "print a built-in suite as JSON and exit");
  app.add_flag("--list", list, "list verifier tags and exit");
  CLI11_PARSE(app, argc, argv);

  try {
    if (list) {
      for (const auto& v : strata::verifier_registry()) std::cout << v.tag << "\t" << v.summary << "\n";
      return 0;
    }
    if (!emit.empty()) {
      std::cout << strata::to_json(strata::emit_builtin_suite(emit)).dump(2) << "\n";
      return 0;
    }
    if (suite_file.empty() && builtin.empty()) {
      std::cerr << "one of --suite or --builtin is required\n" << app.help();
      return 2;
    }
    strata::SuiteConfig cfg = suite_file.empty() ? strata::emit_builtin_suite(builtin) : strata::load_suite(suite_file);
    strata::SuiteOptions opt;
    opt.jobs = jobs;
    opt.allow_inconclusive = allow_inconclusive;
    if (!out_dir.empty()) opt.out_dir = out_dir;
    else if (const char* env = std::getenv("STRATA_OUT_DIR"); env && *env) opt.out_dir = env;

    auto res = strata::run_suite(cfg, opt);
    for (const auto& r : res.runs)
      if (!r.error.empty()) std::cerr << "run " << r.index << " (" << r.theorem << "): " << r.error << "\n";
    std::cout << res.summary;
    std::cout << "reports written to " << opt.out_dir.string() << "\n";
    return res.exit_code;
  } catch (const strata::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
