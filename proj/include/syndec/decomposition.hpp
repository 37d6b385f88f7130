// Splits the mutual information of a channel into one nonnegative
// contribution per interaction order: level i's share is the divergence
// between the projections onto levels i and i-1, and the shares sum back
// to the mutual information (the projections are divergence-orthogonal).

#pragma once

#include <vector>

#include "syndec/core.hpp"
#include "syndec/projection.hpp"

namespace syndec {

struct DecompositionProfile {
  /// Per-order contributions d_1..d_N in the reporting base.
  std::vector<double> d;
  /// Mutual information of the pair in the reporting base.
  double total_mutual_information = 0.0;
  /// Projection diagnostics for levels 0..N.
  std::vector<ProjectionResult> per_level;
  /// |sum of d - mutual information| in the reporting base.
  double sum_residual = 0.0;
  double base = 2.0;
};

/// Full profile: projects onto every level (closed form at level 0, fitting
/// solver above) and takes successive divergences. Contributions in
/// [-1e-9, 0) are clamped to zero; anything lower, or a sum residual above
/// 1e-6, is reported as a solver failure rather than smoothed over.
DecompositionProfile decompose(const InputDistribution& p, const Channel& k,
                               const SolverConfig& config = {}, double base = 2.0);

/// Highest-order contribution for a two-input channel: the divergence of k
/// from its projection onto level 1.
double synergy(const InputDistribution& p, const Channel& k,
               const SolverConfig& config = {}, double base = 2.0);

/// Classical interaction information of a three-variable joint (two inputs
/// and the output): positive for parity-like triples, negative for
/// redundant ones, zero under independence.
double interaction_information(const JointDistribution& j, double base = 2.0);

}  // namespace syndec
