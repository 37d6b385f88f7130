#include "syndec/core.hpp"

#include <cmath>
#include <numeric>

namespace syndec {

namespace {

void check_table(std::span<const double> table, double tol, const char* what) {
  double sum = 0.0;
  for (double v : table) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw validation_error(std::string(what) + ": entries must be finite and nonnegative");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol) {
    throw validation_error(std::string(what) + ": entries sum to " + std::to_string(sum) +
                           ", expected 1");
  }
}

}  // namespace

ChannelSpace::ChannelSpace(std::vector<int> input_cardinalities, int output_cardinality)
    : cards_(std::move(input_cardinalities)), out_(output_cardinality) {
  if (cards_.empty()) throw validation_error("ChannelSpace: at least one input required");
  if (out_ < 1) throw validation_error("ChannelSpace: output cardinality must be >= 1");
  long long size = 1;
  for (int c : cards_) {
    if (c < 1) throw validation_error("ChannelSpace: input cardinalities must be >= 1");
    size *= c;
    if (size * out_ > (1LL << 22)) {
      throw validation_error("ChannelSpace: table would be too large for dense storage");
    }
  }
  input_size_ = static_cast<int>(size);
  strides_.assign(cards_.size(), 1);
  for (int i = static_cast<int>(cards_.size()) - 2; i >= 0; --i) {
    strides_[i] = strides_[i + 1] * cards_[i + 1];
  }
}

int ChannelSpace::input_cardinality(int i) const {
  if (i < 0 || i >= num_inputs()) throw validation_error("ChannelSpace: input index out of range");
  return cards_[static_cast<std::size_t>(i)];
}

int ChannelSpace::flatten(std::span<const int> digits) const {
  if (static_cast<int>(digits.size()) != num_inputs()) {
    throw validation_error("flatten: wrong number of digits");
  }
  int index = 0;
  for (int i = 0; i < num_inputs(); ++i) {
    if (digits[i] < 0 || digits[i] >= cards_[i]) {
      throw validation_error("flatten: digit out of range");
    }
    index += digits[i] * strides_[i];
  }
  return index;
}

std::vector<int> ChannelSpace::unflatten(int index) const {
  if (index < 0 || index >= input_size_) throw validation_error("unflatten: index out of range");
  std::vector<int> digits(cards_.size());
  for (int i = 0; i < num_inputs(); ++i) digits[i] = (index / strides_[i]) % cards_[i];
  return digits;
}

int ChannelSpace::digit(int index, int i) const {
  return (index / strides_[static_cast<std::size_t>(i)]) % cards_[static_cast<std::size_t>(i)];
}

InputDistribution::InputDistribution(ChannelSpace space, std::vector<double> table)
    : space_(std::move(space)), table_(std::move(table)) {
  if (static_cast<int>(table_.size()) != space_.input_size()) {
    throw validation_error("InputDistribution: table length does not match space");
  }
  check_table(table_, construction_tolerance, "InputDistribution");
}

InputDistribution InputDistribution::uniform(const ChannelSpace& space) {
  std::vector<double> t(static_cast<std::size_t>(space.input_size()),
                        1.0 / space.input_size());
  return InputDistribution(space, std::move(t));
}

bool InputDistribution::strictly_positive() const {
  for (double v : table_) {
    if (v <= 0.0) return false;
  }
  return true;
}

Channel::Channel(ChannelSpace space, std::vector<double> rows)
    : space_(std::move(space)), rows_(std::move(rows)) {
  if (static_cast<int>(rows_.size()) != space_.joint_size()) {
    throw validation_error("Channel: table length does not match space");
  }
  const int y = space_.output_cardinality();
  for (int x = 0; x < space_.input_size(); ++x) {
    check_table(std::span<const double>(rows_).subspan(
                    static_cast<std::size_t>(x) * y, static_cast<std::size_t>(y)),
                construction_tolerance, "Channel row");
  }
}

Channel Channel::deterministic(const ChannelSpace& space,
                               const std::function<int(std::span<const int>)>& output_of) {
  std::vector<double> rows(static_cast<std::size_t>(space.joint_size()), 0.0);
  const int ycard = space.output_cardinality();
  for (int x = 0; x < space.input_size(); ++x) {
    const std::vector<int> digits = space.unflatten(x);
    const int y = output_of(digits);
    if (y < 0 || y >= ycard) throw validation_error("deterministic: output out of range");
    rows[static_cast<std::size_t>(x) * ycard + y] = 1.0;
  }
  return Channel(space, std::move(rows));
}

Channel Channel::constant(const ChannelSpace& space,
                          std::span<const double> output_distribution) {
  if (static_cast<int>(output_distribution.size()) != space.output_cardinality()) {
    throw validation_error("constant: output table length does not match space");
  }
  std::vector<double> rows;
  rows.reserve(static_cast<std::size_t>(space.joint_size()));
  for (int x = 0; x < space.input_size(); ++x) {
    rows.insert(rows.end(), output_distribution.begin(), output_distribution.end());
  }
  return Channel(space, std::move(rows));
}

std::span<const double> Channel::row(int x) const {
  const int y = space_.output_cardinality();
  return std::span<const double>(rows_).subspan(static_cast<std::size_t>(x) * y,
                                                static_cast<std::size_t>(y));
}

double Channel::at(int x, int y) const {
  return rows_[static_cast<std::size_t>(x) * space_.output_cardinality() + y];
}

JointDistribution::JointDistribution(ChannelSpace space, std::vector<double> table)
    : space_(std::move(space)), table_(std::move(table)) {
  if (static_cast<int>(table_.size()) != space_.joint_size()) {
    throw validation_error("JointDistribution: table length does not match space");
  }
  check_table(table_, construction_tolerance, "JointDistribution");
}

double JointDistribution::at(int x, int y) const {
  return table_[static_cast<std::size_t>(x) * space_.output_cardinality() + y];
}

JointDistribution compose_joint(const InputDistribution& p, const Channel& k) {
  if (!(p.space() == k.space())) throw validation_error("compose_joint: space mismatch");
  const ChannelSpace& s = p.space();
  const int ycard = s.output_cardinality();
  std::vector<double> t(static_cast<std::size_t>(s.joint_size()));
  for (int x = 0; x < s.input_size(); ++x) {
    for (int y = 0; y < ycard; ++y) {
      t[static_cast<std::size_t>(x) * ycard + y] = p.at(x) * k.at(x, y);
    }
  }
  // Cells with p(x) = 0 are exactly zero, so the joint normalizes whenever
  // p and the rows of k do.
  return JointDistribution(s, std::move(t));
}

std::vector<double> pushforward(const InputDistribution& p, const Channel& k) {
  if (!(p.space() == k.space())) throw validation_error("pushforward: space mismatch");
  const int ycard = p.space().output_cardinality();
  std::vector<double> out(static_cast<std::size_t>(ycard), 0.0);
  for (int x = 0; x < p.space().input_size(); ++x) {
    const double px = p.at(x);
    if (px == 0.0) continue;
    for (int y = 0; y < ycard; ++y) out[y] += px * k.at(x, y);
  }
  return out;
}

namespace {

void check_subset(const ChannelSpace& space, std::span<const int> subset) {
  int prev = -1;
  for (int i : subset) {
    if (i < 0 || i >= space.num_inputs()) {
      throw validation_error("subset: invalid input index " + std::to_string(i));
    }
    if (i <= prev) throw validation_error("subset: indices must be strictly increasing");
    prev = i;
  }
}

}  // namespace

int marginal_size(const ChannelSpace& space, std::span<const int> subset,
                  bool include_output) {
  check_subset(space, subset);
  int size = 1;
  for (int i : subset) size *= space.input_cardinality(i);
  if (include_output) size *= space.output_cardinality();
  return size;
}

std::vector<int> marginal_index_map(const ChannelSpace& space,
                                    std::span<const int> subset,
                                    bool include_output) {
  check_subset(space, subset);
  const int ycard = space.output_cardinality();
  std::vector<int> map(static_cast<std::size_t>(space.joint_size()));
  for (int x = 0; x < space.input_size(); ++x) {
    int idx = 0;
    for (int i : subset) idx = idx * space.input_cardinality(i) + space.digit(x, i);
    for (int y = 0; y < ycard; ++y) {
      map[static_cast<std::size_t>(x) * ycard + y] = include_output ? idx * ycard + y : idx;
    }
  }
  return map;
}

std::vector<double> marginalize(const JointDistribution& j,
                                std::span<const int> subset,
                                bool include_output) {
  const std::vector<int> map = marginal_index_map(j.space(), subset, include_output);
  std::vector<double> out(
      static_cast<std::size_t>(marginal_size(j.space(), subset, include_output)), 0.0);
  const std::vector<double>& t = j.table();
  for (std::size_t c = 0; c < t.size(); ++c) out[static_cast<std::size_t>(map[c])] += t[c];
  return out;
}

namespace detail {

double base_factor(double base) {
  if (!(base > 0.0) || base == 1.0) throw validation_error("base must be positive and != 1");
  return std::log(base);
}

double entropy_nats(std::span<const double> table) {
  double h = 0.0;
  for (double v : table) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

double kl_nats(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw validation_error("kl_divergence: length mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > 0.0) {
      if (b[i] <= 0.0) {
        throw infinite_divergence_error("kl_divergence: absolute continuity fails at index " +
                                        std::to_string(i));
      }
      d += a[i] * std::log(a[i] / b[i]);
    }
  }
  return d;
}

double channel_divergence_nats(const InputDistribution& p, const Channel& k,
                               const Channel& m) {
  if (!(p.space() == k.space()) || !(k.space() == m.space())) {
    throw validation_error("channel_divergence: space mismatch");
  }
  const int ycard = p.space().output_cardinality();
  double d = 0.0;
  for (int x = 0; x < p.space().input_size(); ++x) {
    const double px = p.at(x);
    if (px == 0.0) continue;
    for (int y = 0; y < ycard; ++y) {
      const double w = px * k.at(x, y);
      if (w > 0.0) {
        if (m.at(x, y) <= 0.0) {
          throw infinite_divergence_error(
              "channel_divergence: absolute continuity fails at input " + std::to_string(x) +
              ", output " + std::to_string(y));
        }
        d += w * std::log(k.at(x, y) / m.at(x, y));
      }
    }
  }
  return d;
}

double mutual_information_nats(const JointDistribution& j) {
  double sum = 0.0;
  for (double v : j.table()) sum += v;
  if (std::abs(sum - 1.0) > boundary_tolerance) {
    throw validation_error("mutual_information: joint is not normalized");
  }
  const ChannelSpace& s = j.space();
  const int ycard = s.output_cardinality();
  std::vector<double> py(static_cast<std::size_t>(ycard), 0.0);
  std::vector<double> px(static_cast<std::size_t>(s.input_size()), 0.0);
  for (int x = 0; x < s.input_size(); ++x) {
    for (int y = 0; y < ycard; ++y) {
      px[x] += j.at(x, y);
      py[y] += j.at(x, y);
    }
  }
  double mi = 0.0;
  for (int x = 0; x < s.input_size(); ++x) {
    for (int y = 0; y < ycard; ++y) {
      const double v = j.at(x, y);
      if (v > 0.0) mi += v * std::log(v / (px[x] * py[y]));
    }
  }
  return mi;
}

}  // namespace detail

double entropy(std::span<const double> table, double base) {
  double sum = 0.0;
  for (double v : table) {
    if (v < 0.0) throw validation_error("entropy: negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > boundary_tolerance) {
    throw validation_error("entropy: table sums to " + std::to_string(sum) + ", expected 1");
  }
  return detail::entropy_nats(table) / detail::base_factor(base);
}

double kl_divergence(std::span<const double> a, std::span<const double> b, double base) {
  return detail::kl_nats(a, b) / detail::base_factor(base);
}

double channel_divergence(const InputDistribution& p, const Channel& k, const Channel& m,
                          double base) {
  return detail::channel_divergence_nats(p, k, m) / detail::base_factor(base);
}

double mutual_information(const JointDistribution& j, double base) {
  return detail::mutual_information_nats(j) / detail::base_factor(base);
}

}  // namespace syndec
