#include "syndec/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace syndec {

namespace {

using nlohmann::json;

std::vector<double> read_probability_vector(const json& node, std::size_t expected,
                                            const std::string& what) {
  if (!node.is_array() || node.size() != expected) {
    throw validation_error(what + " must be an array of length " + std::to_string(expected));
  }
  std::vector<double> values;
  values.reserve(expected);
  double sum = 0.0;
  for (const json& v : node) {
    if (!v.is_number()) throw validation_error(what + " must contain only numbers");
    const double x = v.get<double>();
    if (!std::isfinite(x) || x < 0.0) {
      throw validation_error(what + " must contain finite nonnegative values");
    }
    values.push_back(x);
    sum += x;
  }
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw validation_error(what + " sums to " + std::to_string(sum) + ", expected 1");
  }
  // Keep exact inputs untouched so parse/write round-trips bit-for-bit;
  // only repair genuine drift.
  if (std::fabs(sum - 1.0) > 1e-12) {
    for (double& x : values) x /= sum;
  }
  return values;
}

}  // namespace

ChannelFile parse_channel_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw validation_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw validation_error("document root must be an object");
  for (const char* key : {"input_cardinalities", "output_cardinality", "input_distribution",
                          "kernel"}) {
    if (!doc.contains(key)) {
      throw validation_error(std::string("missing required key \"") + key + "\"");
    }
  }

  const json& cards = doc["input_cardinalities"];
  if (!cards.is_array() || cards.empty()) {
    throw validation_error("\"input_cardinalities\" must be a nonempty array");
  }
  std::vector<int> cardinalities;
  for (const json& c : cards) {
    if (!c.is_number_integer() || c.get<long long>() < 2) {
      throw validation_error("input cardinalities must be integers >= 2");
    }
    cardinalities.push_back(c.get<int>());
  }
  const json& ycard_node = doc["output_cardinality"];
  if (!ycard_node.is_number_integer() || ycard_node.get<long long>() < 2) {
    throw validation_error("\"output_cardinality\" must be an integer >= 2");
  }
  const int ycard = ycard_node.get<int>();

  const ChannelSpace space(cardinalities, ycard);
  std::vector<double> p = read_probability_vector(
      doc["input_distribution"], static_cast<std::size_t>(space.input_size()),
      "\"input_distribution\"");

  const json& kernel = doc["kernel"];
  if (!kernel.is_array() || kernel.size() != static_cast<std::size_t>(space.input_size())) {
    throw validation_error("\"kernel\" must have one row per input tuple (" +
                           std::to_string(space.input_size()) + " rows)");
  }
  std::vector<double> rows;
  rows.reserve(static_cast<std::size_t>(space.joint_size()));
  for (std::size_t r = 0; r < kernel.size(); ++r) {
    std::vector<double> row = read_probability_vector(
        kernel[r], static_cast<std::size_t>(ycard), "kernel row " + std::to_string(r));
    rows.insert(rows.end(), row.begin(), row.end());
  }

  return {InputDistribution(space, std::move(p)), Channel(space, std::move(rows))};
}

ChannelFile parse_channel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot read file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_channel_text(buffer.str());
}

std::string write_channel_text(const InputDistribution& p, const Channel& k) {
  if (!(p.space() == k.space())) {
    throw validation_error("write_channel_text: distribution and channel spaces differ");
  }
  const ChannelSpace& space = p.space();
  json doc;
  doc["input_cardinalities"] = space.input_cardinalities();
  doc["output_cardinality"] = space.output_cardinality();
  doc["input_distribution"] = p.table();
  json kernel = json::array();
  for (int x = 0; x < space.input_size(); ++x) {
    const std::span<const double> row = k.row(x);
    kernel.push_back(std::vector<double>(row.begin(), row.end()));
  }
  doc["kernel"] = std::move(kernel);
  return doc.dump(2) + "\n";
}

void write_channel_file(const std::string& path, const InputDistribution& p, const Channel& k) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot write file: " + path);
  out << write_channel_text(p, k);
  if (!out) throw validation_error("failed while writing file: " + path);
}

}  // namespace syndec
