#include <algorithm>
#include <filesystem>

#include <gtest/gtest.h>

#include "strata/strata.hpp"
#include "strata/suite.hpp"

using namespace strata;
using nlohmann::json;

namespace {

SuiteOptions in_memory() {
  SuiteOptions o;
  o.write_files = false;
  return o;
}

std::string config_error(const std::string& text) {
  try {
    prepare_suite(parse_suite(text));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Suite, RegistryMatchesDispatch) {
  std::vector<std::string> keys;
  for (const auto& [k, v] : detail::suite_dispatch()) keys.push_back(k);
  auto tags = verifier_tags();
  std::sort(tags.begin(), tags.end());
  EXPECT_EQ(keys, tags);
}

TEST(Suite, BuiltinSuitesParse) {
  EXPECT_EQ(emit_builtin_suite("paper-full").runs.size(), 13u);
  EXPECT_EQ(emit_builtin_suite("identities-only").runs.size(), 5u);
  EXPECT_EQ(emit_builtin_suite("smoke").runs.size(), 3u);
  for (const auto& name : builtin_suite_names()) {
    auto cfg = emit_builtin_suite(name);
    // round trip through text
    auto again = parse_suite(to_json(cfg).dump(2));
    EXPECT_EQ(again.runs, cfg.runs) << name;
    EXPECT_NO_THROW(prepare_suite(again)) << name;
  }
  EXPECT_THROW(emit_builtin_suite("nope"), ConfigError);
}

TEST(Suite, EmptySuiteSucceeds) {
  auto res = run_suite(parse_suite(R"({"name": "empty", "runs": []})"), in_memory());
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_TRUE(res.runs.empty());
}

TEST(Suite, ConfigErrors) {
  EXPECT_NE(config_error(R"({"runs": [{"theorem": "hardy", "group": "euclidean:2", "p": [0.5, 2],
      "u": {"type": "bump", "center": [1, 1], "radius": 0.3},
      "domain": {"cube": [0.5, 1.5]}}]})")
                .find("p_i must exceed 1"),
            std::string::npos);
  EXPECT_NE(config_error("{\"runs\": [\n  {\"theorem\": \"hardy\",,}\n]}").find("line 2"), std::string::npos);
  EXPECT_NE(config_error(R"({"runs": [{"theorem": "poincare"}]})").find("unknown theorem tag"), std::string::npos);
  EXPECT_NE(config_error(R"({"runs": [{"theorem": "hardy", "group": "euclidean:2", "p": [2, 2]}]})").find("runs[0]"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"runs": [{"theorem": "hardy", "group": "sphere:2"}]})"), "");
  EXPECT_NE(config_error(R"({"runs": 3})"), "");
}

TEST(Suite, SmokeRunPassesAndIsReproducible) {
  auto cfg = emit_builtin_suite("smoke");
  auto a = run_suite(cfg, in_memory());
  auto o = in_memory();
  o.jobs = 3;
  auto b = run_suite(cfg, o);
  EXPECT_EQ(a.exit_code, 0) << a.summary;
  ASSERT_EQ(a.runs.size(), b.runs.size());
  for (std::size_t i = 0; i < a.runs.size(); ++i) {
    auto ra = a.runs[i].record, rb = b.runs[i].record;
    ra.erase("timestamp");
    rb.erase("timestamp");
    EXPECT_EQ(ra.dump(), rb.dump()) << i;
    for (const char* key : {"theorem", "group", "params", "domain", "quadrature", "lhs", "rhs", "margin",
                            "combined_error", "verdict", "diagnostics", "notes"})
      EXPECT_TRUE(ra.contains(key)) << key;
  }
}

TEST(Suite, WritesReportFiles) {
  auto dir = std::filesystem::temp_directory_path() / "strata_suite_test";
  std::filesystem::remove_all(dir);
  SuiteOptions o;
  o.out_dir = dir;
  auto cfg = parse_suite(R"({"name": "one", "runs": [{"theorem": "rho_identities", "group": "euclidean:2",
      "particles": 3, "domain": {"cube": [-1, 1]}, "points": 50}]})");
  auto res = run_suite(cfg, o);
  EXPECT_EQ(res.exit_code, 0) << res.summary;
  EXPECT_TRUE(std::filesystem::exists(dir / "summary.txt"));
  EXPECT_TRUE(std::filesystem::exists(dir / "000_rho_identities.json"));
  std::filesystem::remove_all(dir);
}

TEST(Suite, RunErrorSetsExitCode) {
  // f changes sign inside the support of u, so evaluation fails
  auto cfg = parse_suite(R"({"runs": [{"theorem": "ground_state", "group": "euclidean:3",
      "f": "poly:x1", "alpha": 0.5, "u": {"type": "bump", "center": [0, 0, 0], "radius": 0.5},
      "domain": {"cube": [-1, 1]}, "quadrature": {"method": "mc", "n": 2000, "seed": 1}}]})");
  auto res = run_suite(cfg, in_memory());
  ASSERT_EQ(res.runs.size(), 1u);
  EXPECT_NE(res.runs[0].verdict, Verdict::pass);
  EXPECT_FALSE(res.runs[0].error.empty());
  EXPECT_TRUE(res.runs[0].record.contains("error"));
  EXPECT_NE(res.exit_code, 0);
}
