#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace strata {

struct VerifierInfo {
  std::string_view tag;
  std::string_view summary;
  bool equality;  // checks an identity rather than an inequality
};

/// Every theorem-level check the library exposes, by suite tag.
inline const std::vector<VerifierInfo>& verifier_registry() {
  static const std::vector<VerifierInfo> reg = {
      {"picone", "first- and second-order Picone identities, L = R >= 0", true},
      {"hardy", "anisotropic Hardy inequality with weights |x'_i|^{-p_i}", false},
      {"rellich", "anisotropic Rellich inequality with weights |x'_i|^{-2 p_i}", false},
      {"hardy_multi", "Hardy inequality with several singularities", false},
      {"uncertainty", "uncertainty principle from the multi-singular Hardy inequality", false},
      {"harmonicity", "harmonicity residual of the multi-singular weight w", true},
      {"lemma_3_1", "Euclidean vector-field lower bound for the Dirichlet energy", false},
      {"many_particle", "many-particle Hardy inequality on the product group", false},
      {"rho_identities", "algebraic identities of rho^2 on the product group", true},
      {"ground_state", "ground-state representation of the Dirichlet energy", true},
      {"total_separation", "many-particle identity with rho^2 as ground state", true},
      {"exp_weight", "Hardy inequality with a Gaussian weight", false},
      {"ibp_identity", "integration-by-parts identity for the Gaussian weight", true},
      {"hardy_sharpness", "Hardy ratios along truncated extremals", false},
  };
  return reg;
}

inline std::vector<std::string> verifier_tags() {
  std::vector<std::string> out;
  for (const auto& v : verifier_registry()) out.emplace_back(v.tag);
  return out;
}

}  // namespace strata
