// Divergence projections onto the hierarchy levels. Three routes with very
// different trust profiles: a closed form for level 0, iterative
// proportional fitting in joint space for the general case, and a direct
// nonlinear minimizer over the level's factor parametrization that serves
// as an independent oracle for the other two.

#pragma once

#include <vector>

#include "syndec/core.hpp"

namespace syndec {

struct SolverConfig {
  /// Convergence threshold on the largest marginal mismatch.
  double tolerance = 1e-10;
  long max_cycles = 100000;
  /// Optional base-measure smoothing for diagnostics; 0 means none.
  double epsilon = 0.0;
  /// Record the joint divergence after each full cycle (diagnostics only).
  bool record_divergence_trace = false;
};

struct ProjectionResult {
  Channel projected;
  /// Divergence of the source channel from the projection, in nats.
  double achieved_divergence = 0.0;
  /// Full constraint cycles performed (0 for closed forms).
  long iterations = 0;
  /// Largest marginal mismatch of the returned joint.
  double residual = 0.0;
  /// Whether the solution sits on (or drifts toward) the boundary of the
  /// level's closure: scaling introduced an exact zero, or a factor
  /// coordinate ran into the direct minimizer's bracket cap.
  bool hit_boundary = false;
  /// Largest deviation of the projection's output distribution from the
  /// source channel's output distribution.
  double output_deviation = 0.0;
  /// Per-cycle joint divergence when requested in SolverConfig.
  std::vector<double> divergence_trace;
};

/// Projection onto level 0 (constant channels), in closed form: every row
/// is the pushforward of p through k, and the divergence equals the mutual
/// information of the pair.
ProjectionResult project_constant(const InputDistribution& p, const Channel& k);

/// Projection onto the given hierarchy level by iterative proportional
/// fitting in joint space. Starts from p tensor uniform, cycles over the
/// level's constraints (full-input first, then output constraints in
/// lexicographic subset order), and stops when every marginal matches
/// within the configured tolerance. Throws solver_error (carrying the last
/// residual) when the cycle budget runs out first.
///
/// When p has zeros the projection is only determined on the support of p;
/// rows at zero-probability inputs are returned uniform.
ProjectionResult ipf_project(const InputDistribution& p, const Channel& k, int order,
                             const SolverConfig& config = {});

struct BruteForceConfig {
  /// Line-search resolution for each coordinate update.
  double line_tolerance = 1e-9;
  /// Random restarts in addition to the all-zero start.
  int starts = 4;
  long max_sweeps = 2000;
  /// Stop when a full sweep improves the objective by less than this (nats).
  double sweep_tolerance = 1e-10;
  /// Half-width of the per-coordinate search bracket; expanded on demand.
  double bracket = 8.0;
  double max_bracket = 60.0;
  unsigned long long seed = 20240811ULL;
};

/// Independent oracle: minimizes the channel divergence directly over the
/// level's exponential parametrization (one free coordinate per generator
/// cell) by multi-start cyclic coordinate descent with golden-section line
/// search. Desk scale only: requires |X| * |Y| <= 64.
ProjectionResult brute_force_project(const InputDistribution& p, const Channel& k,
                                     int order, const BruteForceConfig& config = {});

}  // namespace syndec
