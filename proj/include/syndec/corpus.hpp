// Named reference instances with expected profiles, plus seeded random
// generators for property tests: Dirichlet channels and random members of a
// given hierarchy level. All generators are deterministic for a fixed seed
// (the sampling arithmetic is hand-rolled so the draw sequence is fixed).

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "syndec/core.hpp"

namespace syndec {

struct NamedExample {
  std::string name;
  InputDistribution p;
  Channel k;
  /// Expected per-order contributions in bits, when the profile is exact.
  std::optional<std::vector<double>> expected_d;
  /// Comparison tolerance for expected_d, in bits.
  double tolerance = 1e-6;
  /// True when only qualitative expectations hold (see notes).
  bool qualitative = false;
  /// True when the input distribution has zero-probability atoms.
  bool boundary_input = false;
  std::string notes;
};

/// Registry names, in a stable order. These names are part of the CLI
/// contract (--example NAME).
const std::vector<std::string>& example_names();

/// Look up a registry instance by name; throws validation_error for
/// unknown names.
NamedExample example(const std::string& name);

/// Input distribution and channel with independent symmetric-Dirichlet
/// rows. concentration = 1 draws uniformly from each simplex.
std::pair<InputDistribution, Channel> random_channel(const ChannelSpace& space,
                                                     unsigned long long seed,
                                                     double concentration = 1.0);

/// Random member of the given hierarchy level: factor coordinates drawn
/// uniformly from [-2, 2] for every generator cell of order <= level, rows
/// normalized. Strictly positive by construction.
Channel random_member_of(const ChannelSpace& space, int order,
                         unsigned long long seed);

}  // namespace syndec
