#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "syndec/core.hpp"
#include "syndec/corpus.hpp"

namespace {
using namespace syndec;
}

TEST_SUITE("corpus") {

TEST_CASE("the registry holds the nine named instances") {
  const std::vector<std::string>& names = example_names();
  REQUIRE(names.size() == 9);
  const std::set<std::string> expected{"single_node",  "split",         "correlated_inputs",
                                       "xor_pair",     "parity3",       "and_gate",
                                       "or_gate",      "xor_loses",     "xor_duplicate"};
  CHECK(std::set<std::string>(names.begin(), names.end()) == expected);
  CHECK_THROWS_AS(example("nope"), validation_error);
}

TEST_CASE("every instance is well formed and flagged correctly") {
  for (const std::string& name : example_names()) {
    CAPTURE(name);
    const NamedExample ex = example(name);
    CHECK(ex.name == name);
    CHECK(ex.p.space() == ex.k.space());
    CHECK(ex.boundary_input == !ex.p.strictly_positive());
    // Quantitative instances carry one contribution per input; qualitative
    // ones (the boundary gates) explain themselves instead.
    if (ex.qualitative) {
      CHECK_FALSE(ex.expected_d.has_value());
      CHECK_FALSE(ex.notes.empty());
    } else {
      REQUIRE(ex.expected_d.has_value());
      CHECK(ex.expected_d->size() ==
            static_cast<std::size_t>(ex.p.space().num_inputs()));
    }
  }
}

TEST_CASE("specific registry shapes") {
  CHECK(example("split").k.space().output_cardinality() == 8);
  CHECK(example("parity3").p.space().num_inputs() == 3);
  CHECK(example("xor_loses").p.space().num_inputs() == 3);
  // The correlated pair puts no mass on disagreeing inputs.
  const NamedExample corr = example("correlated_inputs");
  CHECK(corr.p.at(1) == 0.0);
  CHECK(corr.p.at(2) == 0.0);
  CHECK(corr.boundary_input);
}

TEST_CASE("random instances are valid, seeded and reproducible") {
  const ChannelSpace s({2, 2}, 3);
  auto [p1, k1] = random_channel(s, 42);
  auto [p2, k2] = random_channel(s, 42);
  CHECK(p1.table() == p2.table());
  CHECK(k1.table() == k2.table());

  auto [p3, k3] = random_channel(s, 43);
  CHECK(p1.table() != p3.table());

  CHECK(p1.strictly_positive());
  for (int x = 0; x < s.input_size(); ++x) {
    double sum = 0.0;
    for (double v : k1.row(x)) {
      CHECK(v > 0.0);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("concentration controls how uniform random rows look") {
  const ChannelSpace s({2, 2}, 2);
  // Large concentration pulls every row toward uniform.
  auto [p, k] = random_channel(s, 7, 500.0);
  for (int x = 0; x < s.input_size(); ++x) {
    for (double v : k.row(x)) CHECK(std::fabs(v - 0.5) < 0.2);
  }
  for (double v : p.table()) CHECK(std::fabs(v - 0.25) < 0.2);
}

TEST_CASE("random level members are strictly positive channels") {
  const ChannelSpace s({2, 2}, 2);
  for (int order : {0, 1, 2}) {
    const Channel member = random_member_of(s, order, 11);
    for (int x = 0; x < s.input_size(); ++x) {
      double sum = 0.0;
      for (double v : member.row(x)) {
        CHECK(v > 0.0);
        sum += v;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  const Channel again = random_member_of(s, 1, 11);
  CHECK(again.table() == random_member_of(s, 1, 11).table());
}

}  // TEST_SUITE
