// The competing synergy measure and the machinery to compare it with the
// hierarchy's top order for two-input channels: marginal polytopes with
// exact integer null-space bases, mutual-information minimization over
// them, and the one-parameter channel/input family used for the
// lower-bound sweep and heatmap.

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "syndec/core.hpp"

namespace syndec {

/// Which marginals the polytope pins: wedge fixes both (input, output)
/// pairs; triangle additionally fixes the joint input distribution.
enum class PolytopeKind { wedge, triangle };

struct MarginalPolytope {
  PolytopeKind kind = PolytopeKind::wedge;
  int atom_count = 0;
  /// Constraint rows (marginal-cell indicators plus one normalization row).
  std::vector<std::vector<double>> constraints;
  std::vector<double> targets;
  /// Integer direction vectors spanning the null space of the constraint
  /// rows; computed by exact fraction-free elimination, so they annihilate
  /// the constraints and sum to zero exactly.
  std::vector<std::vector<double>> null_basis;
  JointDistribution reference;
};

/// Polytope of joints sharing the reference's pinned marginals. The
/// reference must have exactly two inputs.
MarginalPolytope build_polytope(const JointDistribution& reference, PolytopeKind kind);

struct MinimizeMiResult {
  JointDistribution minimizer;
  /// Minimum mutual information, in the reporting base.
  double minimum = 0.0;
  long cycles = 0;
  /// Largest constraint violation of the minimizer.
  double feasibility_residual = 0.0;
  /// Objective after each coordinate-descent cycle, in the reporting base.
  std::vector<double> objective_trace;
};

/// Minimize mutual information over the polytope by cyclic coordinate
/// descent along the null-space basis with golden-section line searches
/// over each feasible interval. The output distribution is pinned by the
/// constraints, so the objective is convex along every feasible line.
/// The start must be feasible within 1e-9.
MinimizeMiResult minimize_mi(const MarginalPolytope& polytope,
                             const JointDistribution& start, double tol = 1e-12,
                             double base = 2.0);

/// Competing measure: mutual information minus its minimum over the wedge
/// polytope of the pair's joint. Multi-start (reference plus eight seeded
/// feasible perturbations).
double ci_measure(const InputDistribution& p, const Channel& k, double base = 2.0);

/// Top-order contribution computed through the triangle polytope instead
/// of the fitting solver; the two routes must agree.
double d2_via_polytope(const InputDistribution& p, const Channel& k, double base = 2.0);

/// Numeric embedding of the two binary values.
struct BinaryLevels {
  double lo = 0.0;
  double hi = 1.0;
};

/// Two-input binary channel whose log-odds grow with beta times the sum of
/// the embedded input values.
Channel family_channel(double beta, BinaryLevels levels = {});

/// Binary input pair with interaction weight alpha between the embedded
/// values (alpha = 0 is uniform; larger alpha favors agreement on hi).
InputDistribution family_input(double alpha, BinaryLevels levels = {});

/// The two pinned (input, output) marginals of a two-input joint.
struct PairMarginals {
  std::vector<double> first_output;
  std::vector<double> second_output;
};

PairMarginals pair_marginals(const JointDistribution& j);

struct AlphaMatch {
  double alpha = 0.0;
  /// Euclidean distance between the achieved and reference marginals.
  double residual = 0.0;
};

/// Least-squares match: the alpha in [alpha_lo, alpha_hi] whose pair
/// marginals under family_channel(beta) come closest to the reference.
/// Exact preservation is generally impossible, so the residual is part of
/// the answer.
AlphaMatch match_alpha(double beta, const PairMarginals& reference,
                       double alpha_lo = 0.0, double alpha_hi = 20.0,
                       BinaryLevels levels = {});

struct SweepPoint {
  double beta = 0.0;
  double alpha = 0.0;
  double marginal_residual = 0.0;
  /// Mutual information at (alpha, beta), in bits.
  double mutual_information = 0.0;
  /// Mutual information minus its value at the sweep's reference point.
  double lower_bound = 0.0;
};

/// For each beta in the grid, match alpha against the reference point's
/// marginals and record the mutual-information lower bound
/// I(beta) - I(beta0).
std::vector<SweepPoint> sweep_lower_bound(double alpha0, double beta0,
                                          std::span<const double> beta_grid,
                                          BinaryLevels levels = {});

struct TracePoint {
  double beta = 0.0;
  double alpha = 0.0;
  double residual = 0.0;
};

struct HeatmapResult {
  std::vector<double> alpha_grid;
  std::vector<double> beta_grid;
  /// Mutual information in bits, row-major with alpha as the slow index.
  std::vector<double> mi;
  /// One matched-alpha trace per reference point, over the beta grid.
  std::vector<std::vector<TracePoint>> traces;
};

HeatmapResult heatmap(std::span<const double> alpha_grid,
                      std::span<const double> beta_grid,
                      std::span<const std::pair<double, double>> reference_points,
                      BinaryLevels levels = {});

}  // namespace syndec
