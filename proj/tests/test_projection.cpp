#include <cmath>
#include <span>
#include <vector>

#include "doctest.h"
#include "syndec/core.hpp"
#include "syndec/corpus.hpp"
#include "syndec/projection.hpp"

namespace {

using namespace syndec;

Channel xor_channel() {
  return Channel::deterministic(ChannelSpace({2, 2}, 2),
                                [](std::span<const int> x) { return x[0] ^ x[1]; });
}

Channel and_channel() {
  return Channel::deterministic(ChannelSpace({2, 2}, 2),
                                [](std::span<const int> x) { return x[0] & x[1]; });
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::fmax(worst, std::fabs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_SUITE("projection") {

TEST_CASE("constant projection is the pushforward with divergence I") {
  const ChannelSpace s({2, 2}, 2);
  const InputDistribution p(s, {0.1, 0.2, 0.3, 0.4});
  const Channel k = and_channel();

  const ProjectionResult r = project_constant(p, k);
  CHECK(r.iterations == 0);
  CHECK(r.residual == 0.0);
  const std::vector<double> push = pushforward(p, k);
  for (int x = 0; x < s.input_size(); ++x) {
    CHECK(max_abs_diff(r.projected.row(x), push) == 0.0);
  }
  CHECK(r.achieved_divergence ==
        doctest::Approx(detail::mutual_information_nats(compose_joint(p, k))).epsilon(1e-14));
}

TEST_CASE("top-order projection reproduces the channel") {
  const ChannelSpace s({2, 2}, 2);
  const InputDistribution p(s, {0.1, 0.2, 0.3, 0.4});
  for (const Channel& k : {xor_channel(), random_channel(s, 7).second}) {
    const ProjectionResult r = ipf_project(p, k, 2);
    CHECK(r.achieved_divergence <= 1e-12);
    CHECK(max_abs_diff(r.projected.table(), k.table()) <= 1e-9);
  }
}

TEST_CASE("projection is idempotent") {
  const ChannelSpace s({2, 2}, 2);
  auto [p, k] = random_channel(s, 21);
  const ProjectionResult once = ipf_project(p, k, 1);
  const ProjectionResult twice = ipf_project(p, once.projected, 1);
  CHECK(twice.achieved_divergence <= 1e-10);
  CHECK(max_abs_diff(once.projected.table(), twice.projected.table()) <= 1e-9);
}

TEST_CASE("divergence shrinks as the order grows") {
  const ChannelSpace s({2, 2, 2}, 2);
  auto [p, k] = random_channel(s, 33);
  const double d0 = project_constant(p, k).achieved_divergence;
  const double d1 = ipf_project(p, k, 1).achieved_divergence;
  const double d2 = ipf_project(p, k, 2).achieved_divergence;
  const double d3 = ipf_project(p, k, 3).achieved_divergence;
  CHECK(d0 + 1e-8 >= d1);
  CHECK(d1 + 1e-8 >= d2);
  CHECK(d2 + 1e-8 >= d3);
  CHECK(d3 <= 1e-10);
}

TEST_CASE("members of a level project onto themselves") {
  const ChannelSpace s({2, 2}, 2);
  const InputDistribution p = InputDistribution::uniform(s);
  for (unsigned long long seed : {1ULL, 2ULL, 3ULL}) {
    const Channel member = random_member_of(s, 1, seed);
    const ProjectionResult r = ipf_project(p, member, 1);
    CHECK(r.achieved_divergence <= 1e-8);
  }
}

TEST_CASE("successive divergences sum to the mutual information") {
  const ChannelSpace s({2, 2, 2}, 2);
  auto [p, k] = random_channel(s, 5);
  const double mi = detail::mutual_information_nats(compose_joint(p, k));

  std::vector<Channel> levels{project_constant(p, k).projected};
  for (int order = 1; order <= 3; ++order) {
    levels.push_back(ipf_project(p, k, order).projected);
  }
  double sum = 0.0;
  for (std::size_t i = 1; i < levels.size(); ++i) {
    sum += detail::channel_divergence_nats(p, levels[i], levels[i - 1]);
  }
  CHECK(std::fabs(sum - mi) <= 1e-6);
}

TEST_CASE("projections split divergences to members of the level") {
  // D(k||m) = D(k||proj) + D(proj||m) whenever m lives in the level the
  // projection targets; this is what makes the per-order sums telescope.
  const ChannelSpace s({2, 2}, 2);
  for (unsigned long long seed : {11ULL, 12ULL, 13ULL}) {
    auto [p, k] = random_channel(s, seed);
    const Channel m = random_member_of(s, 1, seed + 100);
    const ProjectionResult r = ipf_project(p, k, 1);
    const double lhs = detail::channel_divergence_nats(p, k, m);
    const double rhs = detail::channel_divergence_nats(p, k, r.projected) +
                       detail::channel_divergence_nats(p, r.projected, m);
    CHECK(std::fabs(lhs - rhs) <= 1e-6);
  }
}

TEST_CASE("recorded divergence trace never increases") {
  const ChannelSpace s({2, 2}, 2);
  const InputDistribution p = InputDistribution::uniform(s);
  SolverConfig config;
  config.record_divergence_trace = true;
  const ProjectionResult r = ipf_project(p, and_channel(), 2, config);
  REQUIRE(r.divergence_trace.size() >= 2);
  for (std::size_t i = 1; i < r.divergence_trace.size(); ++i) {
    CHECK(r.divergence_trace[i] <= r.divergence_trace[i - 1] + 1e-12);
  }
}

TEST_CASE("projections preserve the output distribution and the support") {
  const ChannelSpace s({2, 2}, 2);
  auto [p, k] = random_channel(s, 17);
  const JointDistribution source = compose_joint(p, k);
  for (int order : {1, 2}) {
    const ProjectionResult r = ipf_project(p, k, order);
    CHECK(r.output_deviation <= 1e-8);
    CHECK_FALSE(r.hit_boundary);
    // Wherever the source joint has mass, the projected joint must too.
    const JointDistribution projected = compose_joint(p, r.projected);
    for (int cell = 0; cell < s.joint_size(); ++cell) {
      const int x = cell / s.output_cardinality();
      const int y = cell % s.output_cardinality();
      if (source.at(x, y) > 0.0) CHECK(projected.at(x, y) > 0.0);
    }
  }
}

TEST_CASE("relabeling the inputs does not change the divergences") {
  const ChannelSpace s({2, 2}, 2);
  auto [p, k] = random_channel(s, 29);

  // Swap the two input variables on both tables.
  std::vector<double> swapped_p(4), swapped_k(8);
  for (int x1 = 0; x1 < 2; ++x1) {
    for (int x2 = 0; x2 < 2; ++x2) {
      const int from = x1 * 2 + x2;
      const int to = x2 * 2 + x1;
      swapped_p[static_cast<std::size_t>(to)] = p.at(from);
      for (int y = 0; y < 2; ++y) {
        swapped_k[static_cast<std::size_t>(to) * 2 + y] = k.at(from, y);
      }
    }
  }
  const InputDistribution p2(s, swapped_p);
  const Channel k2(s, swapped_k);

  for (int order : {0, 1, 2}) {
    const double a = order == 0 ? project_constant(p, k).achieved_divergence
                                : ipf_project(p, k, order).achieved_divergence;
    const double b = order == 0 ? project_constant(p2, k2).achieved_divergence
                                : ipf_project(p2, k2, order).achieved_divergence;
    CHECK(std::fabs(a - b) <= 1e-8);
  }
}

TEST_CASE("only the channel on the support of p matters") {
  const ChannelSpace s({2, 2}, 2);
  const InputDistribution p(s, {0.5, 0.5, 0.0, 0.0});
  auto k = random_channel(s, 41).second;

  // Rewrite the rows p never uses.
  std::vector<double> altered = k.table();
  altered[4] = 0.9;
  altered[5] = 0.1;
  altered[6] = 0.2;
  altered[7] = 0.8;
  const Channel k2(s, altered);

  const ProjectionResult a = ipf_project(p, k, 1);
  const ProjectionResult b = ipf_project(p, k2, 1);
  CHECK(a.achieved_divergence == b.achieved_divergence);
  CHECK(a.projected.table() == b.projected.table());
}

TEST_CASE("an exhausted cycle budget is an error carrying diagnostics") {
  const ChannelSpace s({2, 2}, 2);
  const InputDistribution p = InputDistribution::uniform(s);
  SolverConfig config;
  config.max_cycles = 50;
  try {
    ipf_project(p, and_channel(), 1, config);
    FAIL("expected solver_error");
  } catch (const solver_error& e) {
    CHECK(e.cycles == 50);
    CHECK(e.residual > 0.0);
    CHECK(e.residual < 1e-2);
  }
}

TEST_CASE("order bounds and space mismatches are rejected") {
  const ChannelSpace s({2, 2}, 2);
  const InputDistribution p = InputDistribution::uniform(s);
  CHECK_THROWS_AS(ipf_project(p, and_channel(), 3), validation_error);
  CHECK_THROWS_AS(ipf_project(p, and_channel(), -1), validation_error);
  const ChannelSpace other({2, 2, 2}, 2);
  CHECK_THROWS_AS(ipf_project(InputDistribution::uniform(other), and_channel(), 1),
                  validation_error);
}

TEST_CASE("direct minimizer agrees with known projections") {
  const ChannelSpace s({2, 2}, 2);
  const InputDistribution u = InputDistribution::uniform(s);
  // The level-1 projection of xor under uniform inputs is the constant
  // uniform channel: every pairwise (input, output) marginal is flat. The
  // divergence is the full bit.
  const ProjectionResult r = brute_force_project(u, xor_channel(), 1);
  CHECK(r.achieved_divergence == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("direct minimizer matches iterative scaling on random instances") {
  const ChannelSpace s({2, 2}, 2);
  for (unsigned long long seed : {101ULL, 102ULL, 103ULL}) {
    auto [p, k] = random_channel(s, seed);
    const double via_ipf = ipf_project(p, k, 1).achieved_divergence;
    const double direct = brute_force_project(p, k, 1).achieved_divergence;
    CHECK(std::fabs(via_ipf - direct) <= 1e-4);
  }
}

TEST_CASE("smoothing the start is a diagnostic, not a different answer") {
  const ChannelSpace s({2, 2}, 2);
  auto [p, k] = random_channel(s, 55);
  SolverConfig smoothed;
  smoothed.epsilon = 1e-12;
  const double plain = ipf_project(p, k, 1).achieved_divergence;
  const double with_eps = ipf_project(p, k, 1, smoothed).achieved_divergence;
  CHECK(std::fabs(plain - with_eps) <= 1e-6);
}

}  // TEST_SUITE
