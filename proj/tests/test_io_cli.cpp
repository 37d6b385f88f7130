#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "syndec/cli.hpp"
#include "syndec/core.hpp"
#include "syndec/corpus.hpp"
#include "syndec/decomposition.hpp"
#include "syndec/io.hpp"

namespace {

using namespace syndec;

/// Runs the CLI capturing both streams.
struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = syndec::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

int count_lines(const std::string& text) {
  return static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_SUITE("io_cli") {

TEST_CASE("a minimal one-input copy channel loads and decomposes to one bit") {
  const std::string text = R"({
    "input_cardinalities": [2],
    "output_cardinality": 2,
    "input_distribution": [0.5, 0.5],
    "kernel": [[1, 0], [0, 1]]
  })";
  const ChannelFile f = parse_channel_text(text);
  CHECK(f.input.space().num_inputs() == 1);
  const DecompositionProfile profile = decompose(f.input, f.channel);
  REQUIRE(profile.d.size() == 1);
  CHECK(std::fabs(profile.d[0] - 1.0) <= 1e-9);
}

TEST_CASE("malformed documents are rejected with the violation named") {
  const std::string bad_row = R"({
    "input_cardinalities": [2],
    "output_cardinality": 2,
    "input_distribution": [0.5, 0.5],
    "kernel": [[1, 0], [0.5, 0.4]]
  })";
  try {
    parse_channel_text(bad_row);
    FAIL("expected validation_error");
  } catch (const validation_error& e) {
    CHECK(contains(e.what(), "row 1"));
  }

  CHECK_THROWS_AS(parse_channel_text(R"({
    "input_cardinalities": [2],
    "output_cardinality": 2,
    "input_distribution": [1.5, -0.5],
    "kernel": [[1, 0], [0, 1]]
  })"),
                  validation_error);

  CHECK_THROWS_AS(parse_channel_text(R"({"output_cardinality": 2})"), validation_error);
  CHECK_THROWS_AS(parse_channel_text("not json at all"), validation_error);
  CHECK_THROWS_AS(parse_channel_file("no_such_file_here.json"), validation_error);
}

TEST_CASE("write and parse round-trip bit for bit") {
  const ChannelSpace s({2, 3}, 2);
  auto [p, k] = random_channel(s, 99);
  const ChannelFile again = parse_channel_text(write_channel_text(p, k));
  CHECK(again.input.table() == p.table());
  CHECK(again.channel.table() == k.table());

  // A slightly drifted table is renormalized once, after which writing and
  // re-parsing it is a fixed point.
  std::string drifted = write_channel_text(p, k);
  const ChannelFile repaired = parse_channel_text(drifted);
  const ChannelFile twice = parse_channel_text(write_channel_text(repaired.input, repaired.channel));
  CHECK(twice.input.table() == repaired.input.table());
  CHECK(twice.channel.table() == repaired.channel.table());
}

TEST_CASE("file round-trip through the filesystem") {
  const ChannelSpace s({2, 2}, 2);
  auto [p, k] = random_channel(s, 7);
  const std::string path = "tmp_roundtrip.json";
  write_channel_file(path, p, k);
  const ChannelFile f = parse_channel_file(path);
  CHECK(f.input.table() == p.table());
  CHECK(f.channel.table() == k.table());
  std::remove(path.c_str());
}

TEST_CASE("decompose subcommand emits the full report") {
  const CliRun r = run_cli({"decompose", "--example", "xor_pair"});
  REQUIRE(r.code == 0);
  const nlohmann::json doc = nlohmann::json::parse(r.out);
  CHECK(doc["base"] == 2.0);
  REQUIRE(doc["d"].size() == 2);
  CHECK(std::fabs(doc["d"][0].get<double>()) <= 1e-9);
  CHECK(std::fabs(doc["d"][1].get<double>() - 1.0) <= 1e-9);
  CHECK(doc.contains("mutual_information"));
  CHECK(doc.contains("sum_residual"));
  CHECK(doc.contains("levels"));
  CHECK(doc["levels"].size() == 3);
  for (const auto& level : doc["levels"]) {
    CHECK(level.contains("iterations"));
    CHECK(level.contains("residual"));
  }
  CHECK(doc["solver"]["tolerance"] == 1e-10);
  CHECK(doc["solver"]["max_cycles"] == 100000);
}

TEST_CASE("decompose reads channel files and writes to -o") {
  const NamedExample ex = example("xor_pair");
  const std::string in_path = "tmp_instance.json";
  const std::string out_path = "tmp_report.json";
  write_channel_file(in_path, ex.p, ex.k);

  const CliRun r = run_cli({"decompose", in_path, "-o", out_path});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(out_path);
  REQUIRE(f.good());
  const nlohmann::json doc = nlohmann::json::parse(f);
  CHECK(std::fabs(doc["d"][1].get<double>() - 1.0) <= 1e-9);
  std::remove(in_path.c_str());
  std::remove(out_path.c_str());
}

TEST_CASE("exit codes: success, validation, solver, usage") {
  CHECK(run_cli({"decompose", "--example", "xor_pair"}).code == 0);
  // No instance source.
  CHECK(run_cli({"decompose"}).code == 1);
  // Unknown registry name.
  CHECK(run_cli({"decompose", "--example", "nope"}).code == 1);
  // Missing file.
  CHECK(run_cli({"decompose", "missing_file.json"}).code == 1);
  // The boundary gate cannot converge under the default budget.
  CHECK(run_cli({"decompose", "--example", "and_gate"}).code == 2);
  // Unknown subcommand and unknown flag both get usage text.
  const CliRun unknown = run_cli({"frobnicate"});
  CHECK(unknown.code == 64);
  CHECK(contains(unknown.err, "Usage"));
  CHECK(run_cli({"decompose", "--frobnicate"}).code == 64);
  // Help is success.
  const CliRun help = run_cli({"--help"});
  CHECK(help.code == 0);
  CHECK(contains(help.out, "Usage"));
}

TEST_CASE("ci subcommand reports both measures") {
  const CliRun r = run_cli({"ci", "--example", "and_gate"});
  REQUIRE(r.code == 0);
  const nlohmann::json doc = nlohmann::json::parse(r.out);
  CHECK(std::fabs(doc["ci"].get<double>() - 0.5) <= 1e-9);
  CHECK(doc["d2"].get<double>() < doc["ci"].get<double>());
}

TEST_CASE("sweep emits the documented CSV schema") {
  const CliRun r = run_cli({"sweep", "--steps", "5"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "beta,alpha,marginal_residual,mutual_information_bits,lower_bound_bits");
  CHECK(count_lines(r.out) == 6);

  // Rows are ordered by the beta grid.
  double prev = -1.0;
  std::string row;
  while (std::getline(lines, row)) {
    const double beta = std::stod(row.substr(0, row.find(',')));
    CHECK(beta > prev);
    prev = beta;
  }

  const CliRun js = run_cli({"sweep", "--steps", "5", "--json"});
  REQUIRE(js.code == 0);
  CHECK(nlohmann::json::parse(js.out).size() == 5);
}

TEST_CASE("heatmap emits one row per grid cell") {
  const CliRun r = run_cli({"heatmap", "--alpha-steps", "3", "--alpha-max", "2", "--beta-steps", "4",
                        "--beta-max", "3"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "alpha,beta,mi_bits");
  CHECK(count_lines(r.out) == 1 + 3 * 4);
}

TEST_CASE("examples lists the registry and dumps instances") {
  const CliRun list = run_cli({"examples"});
  REQUIRE(list.code == 0);
  for (const std::string& name : example_names()) {
    CHECK(contains(list.out, name));
  }

  const CliRun dump = run_cli({"examples", "--example", "xor_pair"});
  REQUIRE(dump.code == 0);
  const ChannelFile f = parse_channel_text(dump.out);
  CHECK(f.input.space().num_inputs() == 2);
}

}  // TEST_SUITE
