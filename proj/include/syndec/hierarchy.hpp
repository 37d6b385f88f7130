// Marginal constraint sets describing each level of the interaction-order
// hierarchy. Level i of the hierarchy is, in dual form, the set of joints
// that reproduce the input distribution exactly and every (X_I, output)
// marginal with |I| = i; these are the fixed targets the projection solver
// cycles over.

#pragma once

#include <vector>

#include "syndec/core.hpp"

namespace syndec {

/// One marginal target: the joint must reproduce this marginal over
/// (X_subset[, output]).
struct MarginalConstraint {
  std::vector<int> subset;
  bool include_output = false;
  std::vector<double> target;
};

/// All constraints for one hierarchy level, in solver order: the full-input
/// constraint first, then one output constraint per subset of the level's
/// order, in lexicographic subset order. For order 0 the single output
/// constraint has an empty subset (it pins the output distribution alone).
struct ConstraintSet {
  int order = 0;
  std::vector<MarginalConstraint> constraints;
};

/// All size-i subsets of {0, ..., n-1} in lexicographic order.
std::vector<std::vector<int>> subsets_of_order(int n, int i);

/// Constraint set of the given order for the pair (p, k); targets are the
/// corresponding marginals of the joint p(x) k(x;y).
ConstraintSet constraint_set(const InputDistribution& p, const Channel& k, int order);

}  // namespace syndec
