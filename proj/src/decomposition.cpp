#include "syndec/decomposition.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace syndec {

DecompositionProfile decompose(const InputDistribution& p, const Channel& k,
                               const SolverConfig& config, double base) {
  if (!(p.space() == k.space())) throw validation_error("decompose: space mismatch");
  const int n = p.space().num_inputs();
  const double factor = detail::base_factor(base);

  DecompositionProfile profile;
  profile.base = base;
  profile.per_level.reserve(static_cast<std::size_t>(n) + 1);
  profile.per_level.push_back(project_constant(p, k));
  for (int i = 1; i <= n; ++i) {
    profile.per_level.push_back(ipf_project(p, k, i, config));
  }

  profile.total_mutual_information =
      detail::mutual_information_nats(compose_joint(p, k)) / factor;

  for (int i = 1; i <= n; ++i) {
    const double di =
        detail::channel_divergence_nats(p, profile.per_level[static_cast<std::size_t>(i)].projected,
                                        profile.per_level[static_cast<std::size_t>(i) - 1].projected) /
        factor;
    if (di < -1e-9) {
      throw solver_error("decompose: negative contribution " + std::to_string(di) +
                             " at order " + std::to_string(i),
                         -di, profile.per_level[static_cast<std::size_t>(i)].iterations);
    }
    profile.d.push_back(di < 0.0 ? 0.0 : di);
  }

  const double sum = std::accumulate(profile.d.begin(), profile.d.end(), 0.0);
  profile.sum_residual = std::fabs(sum - profile.total_mutual_information);
  if (profile.sum_residual > 1e-6) {
    throw solver_error("decompose: contributions sum to " + std::to_string(sum) +
                           " but the mutual information is " +
                           std::to_string(profile.total_mutual_information),
                       profile.sum_residual, 0);
  }
  return profile;
}

double synergy(const InputDistribution& p, const Channel& k, const SolverConfig& config,
               double base) {
  if (p.space().num_inputs() != 2) {
    throw validation_error("synergy: defined for channels with exactly two inputs");
  }
  const ProjectionResult level1 = ipf_project(p, k, 1, config);
  return level1.achieved_divergence / detail::base_factor(base);
}

double interaction_information(const JointDistribution& j, double base) {
  if (j.space().num_inputs() != 2) {
    throw validation_error("interaction_information: requires exactly three variables");
  }
  const double factor = detail::base_factor(base);
  const std::vector<int> both{0, 1};
  const std::vector<int> first{0};
  const std::vector<int> second{1};
  const std::vector<int> none{};

  const double h_xyz = detail::entropy_nats(j.table());
  const double h_xy = detail::entropy_nats(marginalize(j, both, false));
  const double h_xz = detail::entropy_nats(marginalize(j, first, true));
  const double h_yz = detail::entropy_nats(marginalize(j, second, true));
  const double h_x = detail::entropy_nats(marginalize(j, first, false));
  const double h_y = detail::entropy_nats(marginalize(j, second, false));
  const double h_z = detail::entropy_nats(marginalize(j, none, true));

  return (-h_xyz + h_xy + h_xz + h_yz - h_x - h_y - h_z) / factor;
}

}  // namespace syndec
