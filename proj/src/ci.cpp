#include "syndec/ci.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "syndec/optimize.hpp"

namespace syndec {

namespace {

// Exact rational arithmetic for the elimination; entries stay tiny for
// indicator matrices, so long long never gets close to overflow.
struct Frac {
  long long num = 0;
  long long den = 1;

  static Frac of(long long n, long long d = 1) {
    Frac f{n, d};
    f.reduce();
    return f;
  }
  void reduce() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }
  bool zero() const { return num == 0; }
};

Frac operator*(const Frac& a, const Frac& b) { return Frac::of(a.num * b.num, a.den * b.den); }
Frac operator/(const Frac& a, const Frac& b) { return Frac::of(a.num * b.den, a.den * b.num); }
Frac operator-(const Frac& a, const Frac& b) {
  return Frac::of(a.num * b.den - b.num * a.den, a.den * b.den);
}

/// Primitive integer basis of the null space of an integer matrix, via
/// reduced row echelon form over the rationals. Deterministic: free
/// columns are taken in increasing order and each vector is scaled to
/// coprime integers with positive leading entry.
std::vector<std::vector<double>> integer_null_basis(
    const std::vector<std::vector<double>>& matrix, int cols) {
  std::vector<std::vector<Frac>> m;
  m.reserve(matrix.size());
  for (const std::vector<double>& row : matrix) {
    std::vector<Frac> r(static_cast<std::size_t>(cols));
    for (int c = 0; c < cols; ++c) r[c] = Frac::of(static_cast<long long>(row[c]));
    m.push_back(std::move(r));
  }

  std::vector<int> pivot_cols;
  std::size_t rank = 0;
  for (int col = 0; col < cols && rank < m.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < m.size() && m[pivot][col].zero()) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[rank], m[pivot]);
    const Frac lead = m[rank][col];
    for (int c = 0; c < cols; ++c) m[rank][c] = m[rank][c] / lead;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][col].zero()) continue;
      const Frac factor = m[r][col];
      for (int c = 0; c < cols; ++c) m[r][c] = m[r][c] - factor * m[rank][c];
    }
    pivot_cols.push_back(col);
    ++rank;
  }

  std::vector<std::vector<double>> basis;
  for (int col = 0; col < cols; ++col) {
    if (std::find(pivot_cols.begin(), pivot_cols.end(), col) != pivot_cols.end()) continue;
    std::vector<Frac> v(static_cast<std::size_t>(cols), Frac::of(0));
    v[col] = Frac::of(1);
    for (std::size_t r = 0; r < pivot_cols.size(); ++r) {
      v[static_cast<std::size_t>(pivot_cols[r])] = Frac::of(0) - m[r][static_cast<std::size_t>(col)];
    }
    long long scale = 1;
    for (const Frac& f : v) scale = std::lcm(scale, f.den);
    std::vector<long long> ints(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) ints[i] = v[i].num * (scale / v[i].den);
    long long g = 0;
    for (long long x : ints) g = std::gcd(g, x < 0 ? -x : x);
    if (g > 1) {
      for (long long& x : ints) x /= g;
    }
    for (long long x : ints) {
      if (x != 0) {
        if (x < 0) {
          for (long long& y : ints) y = -y;
        }
        break;
      }
    }
    std::vector<double> direction(ints.begin(), ints.end());
    basis.push_back(std::move(direction));
  }
  return basis;
}

void append_marginal_rows(const ChannelSpace& space, std::span<const int> subset,
                          bool include_output, const std::vector<double>& reference,
                          std::vector<std::vector<double>>& rows,
                          std::vector<double>& targets) {
  const std::vector<int> map = marginal_index_map(space, subset, include_output);
  const int size = marginal_size(space, subset, include_output);
  for (int idx = 0; idx < size; ++idx) {
    std::vector<double> row(reference.size(), 0.0);
    double target = 0.0;
    for (std::size_t cell = 0; cell < reference.size(); ++cell) {
      if (map[cell] == idx) {
        row[cell] = 1.0;
        target += reference[cell];
      }
    }
    rows.push_back(std::move(row));
    targets.push_back(target);
  }
}

double mi_nats_of_table(const ChannelSpace& space, const std::vector<double>& q,
                        std::vector<double>& px, std::vector<double>& py) {
  const int ycard = space.output_cardinality();
  px.assign(static_cast<std::size_t>(space.input_size()), 0.0);
  py.assign(static_cast<std::size_t>(ycard), 0.0);
  for (int x = 0; x < space.input_size(); ++x) {
    for (int y = 0; y < ycard; ++y) {
      const double v = q[static_cast<std::size_t>(x) * ycard + y];
      if (v > 0.0) {
        px[x] += v;
        py[y] += v;
      }
    }
  }
  double mi = 0.0;
  for (int x = 0; x < space.input_size(); ++x) {
    for (int y = 0; y < ycard; ++y) {
      const double v = q[static_cast<std::size_t>(x) * ycard + y];
      if (v > 0.0) mi += v * std::log(v / (px[x] * py[y]));
    }
  }
  return mi;
}

double feasibility_of(const MarginalPolytope& polytope, const std::vector<double>& q) {
  double worst = 0.0;
  for (std::size_t r = 0; r < polytope.constraints.size(); ++r) {
    double dot = 0.0;
    for (std::size_t c = 0; c < q.size(); ++c) dot += polytope.constraints[r][c] * q[c];
    worst = std::fmax(worst, std::fabs(dot - polytope.targets[r]));
  }
  return worst;
}

}  // namespace

MarginalPolytope build_polytope(const JointDistribution& reference, PolytopeKind kind) {
  const ChannelSpace& space = reference.space();
  if (space.num_inputs() != 2) {
    throw validation_error("build_polytope: reference must have exactly two inputs");
  }
  MarginalPolytope polytope{kind, space.joint_size(), {}, {}, {}, reference};

  const std::vector<int> first{0};
  const std::vector<int> second{1};
  const std::vector<int> both{0, 1};
  append_marginal_rows(space, first, true, reference.table(), polytope.constraints,
                       polytope.targets);
  append_marginal_rows(space, second, true, reference.table(), polytope.constraints,
                       polytope.targets);
  if (kind == PolytopeKind::triangle) {
    append_marginal_rows(space, both, false, reference.table(), polytope.constraints,
                         polytope.targets);
  }
  polytope.constraints.emplace_back(static_cast<std::size_t>(space.joint_size()), 1.0);
  polytope.targets.push_back(1.0);

  polytope.null_basis = integer_null_basis(polytope.constraints, space.joint_size());
  return polytope;
}

MinimizeMiResult minimize_mi(const MarginalPolytope& polytope, const JointDistribution& start,
                             double tol, double base) {
  if (!(start.space() == polytope.reference.space())) {
    throw validation_error("minimize_mi: start does not live on the polytope's space");
  }
  const double start_residual = feasibility_of(polytope, start.table());
  if (start_residual > 1e-9) {
    throw validation_error("minimize_mi: start violates the constraints by " +
                           std::to_string(start_residual));
  }
  const ChannelSpace& space = start.space();
  const double factor = detail::base_factor(base);

  std::vector<double> q = start.table();
  std::vector<double> px;
  std::vector<double> py;
  std::vector<double> trial(q.size());

  double current = mi_nats_of_table(space, q, px, py);
  MinimizeMiResult result{start, current / factor, 0, start_residual, {}};

  const long max_cycles = 100000;
  bool converged = false;
  while (result.cycles < max_cycles) {
    ++result.cycles;
    const double before = current;
    for (const std::vector<double>& h : polytope.null_basis) {
      double tlo = -1e300;
      double thi = 1e300;
      for (std::size_t c = 0; c < q.size(); ++c) {
        if (h[c] > 0.0) {
          tlo = std::fmax(tlo, -q[c] / h[c]);
        } else if (h[c] < 0.0) {
          thi = std::fmin(thi, q[c] / (-h[c]));
        }
      }
      if (!(thi - tlo > 1e-14)) continue;
      const auto along = [&](double t) {
        for (std::size_t c = 0; c < q.size(); ++c) trial[c] = q[c] + t * h[c];
        return mi_nats_of_table(space, trial, px, py);
      };
      const LineSearchResult found = golden_section_minimize(along, tlo, thi, 1e-12);
      if (found.value < current) {
        for (std::size_t c = 0; c < q.size(); ++c) {
          q[c] += found.x * h[c];
          if (q[c] < 0.0) q[c] = q[c] > -1e-12 ? 0.0 : q[c];
        }
        current = found.value;
      }
    }
    result.objective_trace.push_back(current / factor);
    if (before - current < tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    double grad = 0.0;
    for (const std::vector<double>& h : polytope.null_basis) {
      double g = 0.0;
      for (std::size_t c = 0; c < q.size(); ++c) {
        if (q[c] > 0.0 && h[c] != 0.0) {
          const int y = static_cast<int>(c) % space.output_cardinality();
          const int x = static_cast<int>(c) / space.output_cardinality();
          g += h[c] * (std::log(q[c]) - std::log(px[x]) - std::log(py[y]));
        }
      }
      grad = std::fmax(grad, std::fabs(g));
    }
    throw solver_error("minimize_mi: stalled without meeting the cycle tolerance "
                       "(largest directional derivative " + std::to_string(grad) + ")",
                       grad, result.cycles);
  }

  result.minimizer = JointDistribution(space, q);
  result.minimum = current / factor;
  result.feasibility_residual = feasibility_of(polytope, q);
  return result;
}

namespace {

double uniform_unit(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

JointDistribution perturb_feasible(const MarginalPolytope& polytope,
                                   const JointDistribution& reference,
                                   unsigned long long seed) {
  std::vector<double> q = reference.table();
  std::mt19937_64 eng(seed);
  for (int pass = 0; pass < 2; ++pass) {
    for (const std::vector<double>& h : polytope.null_basis) {
      double tlo = -1e300;
      double thi = 1e300;
      for (std::size_t c = 0; c < q.size(); ++c) {
        if (h[c] > 0.0) {
          tlo = std::fmax(tlo, -q[c] / h[c]);
        } else if (h[c] < 0.0) {
          thi = std::fmin(thi, q[c] / (-h[c]));
        }
      }
      if (!(thi - tlo > 1e-12)) continue;
      const double t = tlo + (0.15 + 0.7 * uniform_unit(eng)) * (thi - tlo);
      for (std::size_t c = 0; c < q.size(); ++c) {
        q[c] += t * h[c];
        if (q[c] < 0.0) q[c] = 0.0;
      }
    }
  }
  return JointDistribution(reference.space(), std::move(q));
}

double information_gap(const InputDistribution& p, const Channel& k, PolytopeKind kind,
                       double base) {
  if (p.space().num_inputs() != 2) {
    throw validation_error("polytope measures are defined for two-input channels");
  }
  const JointDistribution joint = compose_joint(p, k);
  const MarginalPolytope polytope = build_polytope(joint, kind);

  double best = 1e300;
  for (int start = 0; start <= 8; ++start) {
    const JointDistribution s =
        start == 0 ? joint
                   : perturb_feasible(polytope, joint, 0xC1000ULL + static_cast<unsigned>(start));
    const MinimizeMiResult r = minimize_mi(polytope, s, 1e-12, base);
    best = std::fmin(best, r.minimum);
  }
  const double gap = mutual_information(joint, base) - best;
  if (gap < -1e-9) {
    throw solver_error("polytope minimum exceeds the mutual information by " +
                           std::to_string(-gap),
                       -gap, 0);
  }
  return gap < 0.0 ? 0.0 : gap;
}

}  // namespace

double ci_measure(const InputDistribution& p, const Channel& k, double base) {
  return information_gap(p, k, PolytopeKind::wedge, base);
}

double d2_via_polytope(const InputDistribution& p, const Channel& k, double base) {
  return information_gap(p, k, PolytopeKind::triangle, base);
}

Channel family_channel(double beta, BinaryLevels levels) {
  const ChannelSpace space({2, 2}, 2);
  std::vector<double> rows(8);
  for (int x = 0; x < 4; ++x) {
    const double v1 = space.digit(x, 0) == 1 ? levels.hi : levels.lo;
    const double v2 = space.digit(x, 1) == 1 ? levels.hi : levels.lo;
    const double s = v1 + v2;
    const double l0 = beta * levels.lo * s;
    const double l1 = beta * levels.hi * s;
    const double m = std::fmax(l0, l1);
    const double e0 = std::exp(l0 - m);
    const double e1 = std::exp(l1 - m);
    rows[static_cast<std::size_t>(x) * 2] = e0 / (e0 + e1);
    rows[static_cast<std::size_t>(x) * 2 + 1] = e1 / (e0 + e1);
  }
  return Channel(space, std::move(rows));
}

InputDistribution family_input(double alpha, BinaryLevels levels) {
  const ChannelSpace space({2, 2}, 2);
  std::vector<double> t(4);
  double z = 0.0;
  for (int x = 0; x < 4; ++x) {
    const double v1 = space.digit(x, 0) == 1 ? levels.hi : levels.lo;
    const double v2 = space.digit(x, 1) == 1 ? levels.hi : levels.lo;
    t[static_cast<std::size_t>(x)] = std::exp(alpha * v1 * v2);
    z += t[static_cast<std::size_t>(x)];
  }
  for (double& v : t) v /= z;
  return InputDistribution(space, std::move(t));
}

PairMarginals pair_marginals(const JointDistribution& j) {
  if (j.space().num_inputs() != 2) {
    throw validation_error("pair_marginals: joint must have exactly two inputs");
  }
  const std::vector<int> first{0};
  const std::vector<int> second{1};
  return {marginalize(j, first, true), marginalize(j, second, true)};
}

AlphaMatch match_alpha(double beta, const PairMarginals& reference, double alpha_lo,
                       double alpha_hi, BinaryLevels levels) {
  const Channel k = family_channel(beta, levels);
  const auto discrepancy = [&](double alpha) {
    const PairMarginals m = pair_marginals(compose_joint(family_input(alpha, levels), k));
    double sse = 0.0;
    for (std::size_t i = 0; i < m.first_output.size(); ++i) {
      const double d1 = m.first_output[i] - reference.first_output[i];
      const double d2 = m.second_output[i] - reference.second_output[i];
      sse += d1 * d1 + d2 * d2;
    }
    return sse;
  };
  const LineSearchResult found =
      golden_section_minimize(discrepancy, alpha_lo, alpha_hi, 1e-10);
  return {found.x, std::sqrt(found.value)};
}

std::vector<SweepPoint> sweep_lower_bound(double alpha0, double beta0,
                                          std::span<const double> beta_grid,
                                          BinaryLevels levels) {
  const PairMarginals reference =
      pair_marginals(compose_joint(family_input(alpha0, levels), family_channel(beta0, levels)));
  const double base_mi =
      mutual_information(compose_joint(family_input(alpha0, levels), family_channel(beta0, levels)));

  std::vector<SweepPoint> out;
  out.reserve(beta_grid.size());
  for (double beta : beta_grid) {
    const AlphaMatch match = match_alpha(beta, reference, 0.0, 20.0, levels);
    const double mi = mutual_information(
        compose_joint(family_input(match.alpha, levels), family_channel(beta, levels)));
    out.push_back({beta, match.alpha, match.residual, mi, mi - base_mi});
  }
  return out;
}

HeatmapResult heatmap(std::span<const double> alpha_grid, std::span<const double> beta_grid,
                      std::span<const std::pair<double, double>> reference_points,
                      BinaryLevels levels) {
  HeatmapResult result;
  result.alpha_grid.assign(alpha_grid.begin(), alpha_grid.end());
  result.beta_grid.assign(beta_grid.begin(), beta_grid.end());
  result.mi.reserve(alpha_grid.size() * beta_grid.size());
  for (double alpha : alpha_grid) {
    const InputDistribution p = family_input(alpha, levels);
    for (double beta : beta_grid) {
      result.mi.push_back(mutual_information(compose_joint(p, family_channel(beta, levels))));
    }
  }
  for (const std::pair<double, double>& ref : reference_points) {
    const PairMarginals reference = pair_marginals(
        compose_joint(family_input(ref.first, levels), family_channel(ref.second, levels)));
    std::vector<TracePoint> trace;
    trace.reserve(beta_grid.size());
    for (double beta : beta_grid) {
      const AlphaMatch match = match_alpha(beta, reference, 0.0, 20.0, levels);
      trace.push_back({beta, match.alpha, match.residual});
    }
    result.traces.push_back(std::move(trace));
  }
  return result;
}

}  // namespace syndec
