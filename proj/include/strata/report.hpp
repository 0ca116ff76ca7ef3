#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace strata {

enum class Verdict { pass, fail, inconclusive };

constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

/// Outcome of a pointwise identity check over a sample.
struct IdentityReport {
  std::string check;
  double max_abs_residual = 0.0;
  std::optional<double> min_value;  // min L for Picone checks
  std::size_t excluded_count = 0;
  std::size_t sample_size = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::fail;
  std::vector<std::pair<std::string, double>> diagnostics;
  std::vector<std::string> notes;

  bool passed() const { return verdict == Verdict::pass; }
  double diagnostic(std::string_view key) const {
    for (const auto& [k, v] : diagnostics)
      if (k == key) return v;
    return std::numeric_limits<double>::quiet_NaN();
  }
};

}  // namespace strata
