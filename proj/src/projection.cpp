#include "syndec/projection.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "syndec/hierarchy.hpp"
#include "syndec/optimize.hpp"

namespace syndec {

namespace {

struct PreparedConstraint {
  std::vector<int> map;      // joint cell -> marginal cell
  std::vector<double> target;
  std::vector<double> buffer;
};

std::vector<PreparedConstraint> prepare(const InputDistribution& p, const Channel& k,
                                        int order) {
  std::vector<PreparedConstraint> prepared;
  for (MarginalConstraint& c : constraint_set(p, k, order).constraints) {
    PreparedConstraint pc;
    pc.map = marginal_index_map(p.space(), c.subset, c.include_output);
    pc.buffer.assign(c.target.size(), 0.0);
    pc.target = std::move(c.target);
    prepared.push_back(std::move(pc));
  }
  return prepared;
}

double constraint_violation(const std::vector<double>& q, PreparedConstraint& c) {
  std::fill(c.buffer.begin(), c.buffer.end(), 0.0);
  for (std::size_t cell = 0; cell < q.size(); ++cell) {
    c.buffer[static_cast<std::size_t>(c.map[cell])] += q[cell];
  }
  double viol = 0.0;
  for (std::size_t i = 0; i < c.target.size(); ++i) {
    viol = std::fmax(viol, std::fabs(c.buffer[i] - c.target[i]));
  }
  return viol;
}

double certified_residual(const std::vector<double>& q,
                          std::vector<PreparedConstraint>& constraints) {
  double r = 0.0;
  for (PreparedConstraint& c : constraints) r = std::fmax(r, constraint_violation(q, c));
  return r;
}

Channel extract_channel(const ChannelSpace& space, const std::vector<double>& q) {
  const int ycard = space.output_cardinality();
  std::vector<double> rows(q.size());
  for (int x = 0; x < space.input_size(); ++x) {
    double mass = 0.0;
    for (int y = 0; y < ycard; ++y) mass += q[static_cast<std::size_t>(x) * ycard + y];
    for (int y = 0; y < ycard; ++y) {
      const std::size_t cell = static_cast<std::size_t>(x) * ycard + y;
      rows[cell] = mass > 0.0 ? q[cell] / mass : 1.0 / ycard;
    }
  }
  return Channel(space, std::move(rows));
}

double output_deviation_of(const InputDistribution& p, const Channel& k,
                           const Channel& projected) {
  const std::vector<double> a = pushforward(p, k);
  const std::vector<double> b = pushforward(p, projected);
  double dev = 0.0;
  for (std::size_t y = 0; y < a.size(); ++y) dev = std::fmax(dev, std::fabs(a[y] - b[y]));
  return dev;
}

void check_support_domination(const InputDistribution& p, const Channel& k,
                              const Channel& projected) {
  const int ycard = p.space().output_cardinality();
  for (int x = 0; x < p.space().input_size(); ++x) {
    for (int y = 0; y < ycard; ++y) {
      if (p.at(x) * k.at(x, y) > 0.0 && projected.at(x, y) <= 0.0) {
        throw std::logic_error("projection lost mass on a source-support cell");
      }
    }
  }
}

}  // namespace

ProjectionResult project_constant(const InputDistribution& p, const Channel& k) {
  if (!(p.space() == k.space())) throw validation_error("project_constant: space mismatch");
  const Channel projected = Channel::constant(p.space(), pushforward(p, k));
  ProjectionResult result{projected, 0.0, 0, 0.0, false, 0.0, {}};
  result.achieved_divergence = detail::channel_divergence_nats(p, k, projected);
  result.output_deviation = output_deviation_of(p, k, projected);
  check_support_domination(p, k, projected);
  return result;
}

ProjectionResult ipf_project(const InputDistribution& p, const Channel& k, int order,
                             const SolverConfig& config) {
  if (!(p.space() == k.space())) throw validation_error("ipf_project: space mismatch");
  const ChannelSpace& space = p.space();
  if (order < 0 || order > space.num_inputs()) {
    throw validation_error("ipf_project: order out of range");
  }
  if (!(config.tolerance > 0.0)) throw validation_error("ipf_project: tolerance must be > 0");

  std::vector<PreparedConstraint> constraints = prepare(p, k, order);
  const int ycard = space.output_cardinality();
  const std::size_t cells = static_cast<std::size_t>(space.joint_size());

  // Start from p tensor uniform: it lies in the closure of every level and
  // gives the full-input constraint for free.
  std::vector<double> q(cells);
  for (int x = 0; x < space.input_size(); ++x) {
    for (int y = 0; y < ycard; ++y) {
      q[static_cast<std::size_t>(x) * ycard + y] = p.at(x) / ycard + config.epsilon;
    }
  }
  if (config.epsilon > 0.0) {
    const double norm = 1.0 + config.epsilon * static_cast<double>(cells);
    for (double& v : q) v /= norm;
  }

  std::vector<double> pk;
  if (config.record_divergence_trace) pk = compose_joint(p, k).table();

  ProjectionResult result{k, 0.0, 0, 0.0, false, 0.0, {}};
  bool converged = false;
  long cycle = 0;
  while (cycle < config.max_cycles) {
    ++cycle;
    double viol = 0.0;
    for (PreparedConstraint& c : constraints) {
      viol = std::fmax(viol, constraint_violation(q, c));
      for (std::size_t cell = 0; cell < cells; ++cell) {
        const std::size_t i = static_cast<std::size_t>(c.map[cell]);
        const double s = c.buffer[i];
        if (s <= 0.0) continue;  // all cells of this group are already zero
        const double t = c.target[i];
        if (t == 0.0) {
          if (q[cell] != 0.0) {
            q[cell] = 0.0;
            result.hit_boundary = true;
          }
        } else {
          q[cell] *= t / s;
        }
      }
    }
    if (config.record_divergence_trace) {
      result.divergence_trace.push_back(detail::kl_nats(pk, q));
    }
    if (viol <= config.tolerance) {
      // The in-cycle violations are one update stale; certify the final
      // state before declaring convergence.
      const double certified = certified_residual(q, constraints);
      if (certified <= config.tolerance) {
        result.residual = certified;
        converged = true;
        break;
      }
    }
  }
  result.iterations = cycle;
  if (!converged) {
    const double last = certified_residual(q, constraints);
    throw solver_error("ipf_project: no convergence at order " + std::to_string(order) +
                           " after " + std::to_string(cycle) + " cycles (residual " +
                           std::to_string(last) + ")",
                       last, cycle);
  }

  result.projected = extract_channel(space, q);
  result.achieved_divergence = detail::channel_divergence_nats(p, k, result.projected);
  result.output_deviation = output_deviation_of(p, k, result.projected);
  check_support_domination(p, k, result.projected);
  return result;
}

namespace {

double uniform_unit(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

struct FactorParametrization {
  std::vector<std::vector<int>> maps;   // per generator: joint cell -> coordinate cell
  std::vector<std::vector<double>> coords;

  void build_rows(const ChannelSpace& space, std::vector<double>& rows) const {
    const int ycard = space.output_cardinality();
    for (int x = 0; x < space.input_size(); ++x) {
      double maxlogit = -1e300;
      for (int y = 0; y < ycard; ++y) {
        const std::size_t cell = static_cast<std::size_t>(x) * ycard + y;
        double logit = 0.0;
        for (std::size_t g = 0; g < maps.size(); ++g) {
          logit += coords[g][static_cast<std::size_t>(maps[g][cell])];
        }
        rows[cell] = logit;
        maxlogit = std::fmax(maxlogit, logit);
      }
      double z = 0.0;
      for (int y = 0; y < ycard; ++y) {
        const std::size_t cell = static_cast<std::size_t>(x) * ycard + y;
        rows[cell] = std::exp(rows[cell] - maxlogit);
        z += rows[cell];
      }
      for (int y = 0; y < ycard; ++y) rows[static_cast<std::size_t>(x) * ycard + y] /= z;
    }
  }
};

}  // namespace

ProjectionResult brute_force_project(const InputDistribution& p, const Channel& k,
                                     int order, const BruteForceConfig& config) {
  if (!(p.space() == k.space())) throw validation_error("brute_force_project: space mismatch");
  const ChannelSpace& space = p.space();
  if (order < 0 || order > space.num_inputs()) {
    throw validation_error("brute_force_project: order out of range");
  }
  if (space.joint_size() > 64) {
    throw validation_error("brute_force_project: instance too large (|X|*|Y| must be <= 64)");
  }

  const std::size_t cells = static_cast<std::size_t>(space.joint_size());

  // Generators: all subsets of the level's order (lower orders are special
  // cases of these factors, so they add nothing).
  FactorParametrization param;
  for (const std::vector<int>& subset : subsets_of_order(space.num_inputs(), order)) {
    param.maps.push_back(marginal_index_map(space, subset, true));
    param.coords.emplace_back(
        static_cast<std::size_t>(marginal_size(space, subset, true)), 0.0);
  }

  const std::vector<double> pk = compose_joint(p, k).table();
  std::vector<double> logk(cells, 0.0);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (pk[cell] > 0.0) logk[cell] = std::log(k.table()[cell]);
  }

  std::vector<double> rows(cells);
  const auto objective = [&]() {
    param.build_rows(space, rows);
    double d = 0.0;
    for (std::size_t cell = 0; cell < cells; ++cell) {
      if (pk[cell] > 0.0) d += pk[cell] * (logk[cell] - std::log(rows[cell]));
    }
    return d;
  };

  double best_objective = 1e300;
  std::vector<std::vector<double>> best_coords;
  long best_sweeps = 0;
  double best_last_gain = 0.0;
  bool bracket_capped = false;

  for (int start = 0; start <= config.starts; ++start) {
    if (start == 0) {
      for (std::vector<double>& c : param.coords) std::fill(c.begin(), c.end(), 0.0);
    } else {
      std::mt19937_64 eng(config.seed + static_cast<unsigned long long>(start));
      for (std::vector<double>& c : param.coords) {
        for (double& v : c) v = -2.0 + 4.0 * uniform_unit(eng);
      }
    }

    double current = objective();
    long sweeps = 0;
    double gain = 0.0;
    while (sweeps < config.max_sweeps) {
      ++sweeps;
      const double before = current;
      for (std::size_t g = 0; g < param.coords.size(); ++g) {
        for (std::size_t i = 0; i < param.coords[g].size(); ++i) {
          const double saved = param.coords[g][i];
          const auto line = [&](double t) {
            param.coords[g][i] = t;
            return objective();
          };
          double center = saved;
          double halfwidth = config.bracket;
          LineSearchResult found{saved, current};
          while (true) {
            found = golden_section_minimize(line, center - halfwidth, center + halfwidth,
                                            config.line_tolerance);
            const bool near_edge =
                std::fabs(found.x - (center - halfwidth)) < 0.05 * halfwidth ||
                std::fabs(found.x - (center + halfwidth)) < 0.05 * halfwidth;
            if (!near_edge) break;
            if (halfwidth >= config.max_bracket) {
              bracket_capped = true;
              break;
            }
            center = found.x;
            halfwidth = std::fmin(2.0 * halfwidth, config.max_bracket);
          }
          if (found.value < current) {
            param.coords[g][i] = found.x;
            current = found.value;
          } else {
            param.coords[g][i] = saved;
          }
        }
      }
      gain = before - current;
      if (gain < config.sweep_tolerance) break;
    }
    if (current < best_objective) {
      best_objective = current;
      best_coords = param.coords;
      best_sweeps = sweeps;
      best_last_gain = gain;
    }
  }

  param.coords = best_coords;
  param.build_rows(space, rows);
  Channel projected(space, rows);

  ProjectionResult result{projected, best_objective, best_sweeps, 0.0,
                          bracket_capped, 0.0, {}};
  // Report the same residual notion as the fitting solver: the largest
  // mismatch of the candidate's constraint marginals against the targets.
  std::vector<PreparedConstraint> constraints = prepare(p, k, order);
  const std::vector<double> qm = compose_joint(p, projected).table();
  result.residual = certified_residual(qm, constraints);
  (void)best_last_gain;
  result.output_deviation = output_deviation_of(p, k, projected);
  check_support_domination(p, k, projected);
  return result;
}

}  // namespace syndec
