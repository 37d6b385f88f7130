#include "syndec/corpus.hpp"

#include <cmath>
#include <random>

#include "syndec/hierarchy.hpp"

namespace syndec {

namespace {

// The standard library distributions are not bit-stable across
// implementations, so the samplers below are written out explicitly; only
// the engine (mt19937_64, which is specified exactly) comes from <random>.

double uniform_unit(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& eng) {
  double u1 = uniform_unit(eng);
  while (u1 <= 0.0) u1 = uniform_unit(eng);
  const double u2 = uniform_unit(eng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

// Marsaglia-Tsang gamma sampler.
double gamma_sample(std::mt19937_64& eng, double shape) {
  if (shape < 1.0) {
    const double boost = std::pow(uniform_unit(eng) + 1e-300, 1.0 / shape);
    return gamma_sample(eng, shape + 1.0) * boost;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / (3.0 * std::sqrt(d));
  while (true) {
    double x = standard_normal(eng);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform_unit(eng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::vector<double> dirichlet(std::mt19937_64& eng, int length, double concentration) {
  std::vector<double> out(static_cast<std::size_t>(length));
  double sum = 0.0;
  for (double& v : out) {
    v = gamma_sample(eng, concentration);
    sum += v;
  }
  for (double& v : out) v /= sum;
  return out;
}

NamedExample make(const std::string& name, InputDistribution p, Channel k,
                  std::optional<std::vector<double>> expected_d, bool qualitative,
                  bool boundary_input, const std::string& notes) {
  return NamedExample{name,        std::move(p), std::move(k), std::move(expected_d),
                      1e-6,        qualitative,  boundary_input, notes};
}

InputDistribution point_mass_mixture(const ChannelSpace& space,
                                     const std::vector<std::vector<int>>& atoms) {
  std::vector<double> t(static_cast<std::size_t>(space.input_size()), 0.0);
  for (const std::vector<int>& a : atoms) {
    t[static_cast<std::size_t>(space.flatten(a))] = 1.0 / atoms.size();
  }
  return InputDistribution(space, std::move(t));
}

}  // namespace

const std::vector<std::string>& example_names() {
  static const std::vector<std::string> names = {
      "single_node",  "split",   "correlated_inputs", "xor_pair",     "parity3",
      "and_gate",     "or_gate", "xor_loses",         "xor_duplicate"};
  return names;
}

NamedExample example(const std::string& name) {
  const ChannelSpace two({2, 2}, 2);
  const ChannelSpace three({2, 2, 2}, 2);

  if (name == "single_node") {
    return make(name, InputDistribution::uniform(three),
                Channel::deterministic(three, [](std::span<const int> x) { return x[0]; }),
                std::vector<double>{1.0, 0.0, 0.0}, false, false,
                "output copies the first input; one bit, all first order");
  }
  if (name == "split") {
    const ChannelSpace wide({2, 2, 2}, 8);
    return make(name, InputDistribution::uniform(wide),
                Channel::deterministic(wide,
                                       [&wide](std::span<const int> x) {
                                         return wide.flatten(x);
                                       }),
                std::vector<double>{3.0, 0.0, 0.0}, false, false,
                "output reproduces the whole input tuple; three bits, all first order");
  }
  if (name == "correlated_inputs") {
    return make(name,
                point_mass_mixture(three, {{0, 0, 0}, {1, 1, 1}}),
                Channel::deterministic(three, [](std::span<const int> x) { return x[0]; }),
                std::vector<double>{1.0, 0.0, 0.0}, false, true,
                "perfectly correlated inputs, output copies one of them");
  }
  if (name == "xor_pair") {
    return make(name, InputDistribution::uniform(two),
                Channel::deterministic(two,
                                       [](std::span<const int> x) { return x[0] ^ x[1]; }),
                std::vector<double>{0.0, 1.0}, false, false,
                "two-input parity; one bit, purely second order");
  }
  if (name == "parity3") {
    return make(name, InputDistribution::uniform(three),
                Channel::deterministic(three,
                                       [](std::span<const int> x) {
                                         return x[0] ^ x[1] ^ x[2];
                                       }),
                std::vector<double>{0.0, 0.0, 1.0}, false, false,
                "three-input parity; one bit, purely third order");
  }
  if (name == "and_gate" || name == "or_gate") {
    const bool is_and = name == "and_gate";
    return make(name, InputDistribution::uniform(two),
                Channel::deterministic(two,
                                       [is_and](std::span<const int> x) {
                                         return is_and ? (x[0] & x[1]) : (x[0] | x[1]);
                                       }),
                std::nullopt, true, false,
                "first- and second-order shares are solver-resolved; their sum is the "
                "analytic mutual information 0.811278 bits and the first-order share "
                "dominates");
  }
  if (name == "xor_loses") {
    return make(name,
                point_mass_mixture(three, {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}}),
                Channel::deterministic(three,
                                       [](std::span<const int> x) { return x[0] ^ x[1]; }),
                std::vector<double>{1.0, 0.0, 0.0}, false, true,
                "third input already carries the parity of the first two, so the bit "
                "arrives at first order");
  }
  if (name == "xor_duplicate") {
    return make(name,
                point_mass_mixture(three, {{0, 0, 0}, {0, 1, 0}, {1, 0, 1}, {1, 1, 1}}),
                Channel::deterministic(three,
                                       [](std::span<const int> x) { return x[0] ^ x[1]; }),
                std::vector<double>{0.0, 1.0, 0.0}, false, true,
                "third input duplicates the first; the parity bit stays second order");
  }
  throw validation_error("unknown example: " + name);
}

std::pair<InputDistribution, Channel> random_channel(const ChannelSpace& space,
                                                     unsigned long long seed,
                                                     double concentration) {
  if (!(concentration > 0.0)) {
    throw validation_error("random_channel: concentration must be > 0");
  }
  std::mt19937_64 eng(seed);
  InputDistribution p(space, dirichlet(eng, space.input_size(), concentration));
  std::vector<double> rows;
  rows.reserve(static_cast<std::size_t>(space.joint_size()));
  for (int x = 0; x < space.input_size(); ++x) {
    const std::vector<double> row = dirichlet(eng, space.output_cardinality(), concentration);
    rows.insert(rows.end(), row.begin(), row.end());
  }
  return {std::move(p), Channel(space, std::move(rows))};
}

Channel random_member_of(const ChannelSpace& space, int order, unsigned long long seed) {
  if (order < 0 || order > space.num_inputs()) {
    throw validation_error("random_member_of: order out of range");
  }
  std::mt19937_64 eng(seed);
  const int ycard = space.output_cardinality();
  std::vector<double> logits(static_cast<std::size_t>(space.joint_size()), 0.0);
  for (int size = 0; size <= order; ++size) {
    for (const std::vector<int>& subset : subsets_of_order(space.num_inputs(), size)) {
      const std::vector<int> map = marginal_index_map(space, subset, true);
      std::vector<double> f(static_cast<std::size_t>(marginal_size(space, subset, true)));
      for (double& v : f) v = -2.0 + 4.0 * uniform_unit(eng);
      for (std::size_t cell = 0; cell < logits.size(); ++cell) {
        logits[cell] += f[static_cast<std::size_t>(map[cell])];
      }
    }
  }
  std::vector<double> rows(logits.size());
  for (int x = 0; x < space.input_size(); ++x) {
    double maxlogit = -1e300;
    for (int y = 0; y < ycard; ++y) {
      maxlogit = std::fmax(maxlogit, logits[static_cast<std::size_t>(x) * ycard + y]);
    }
    double z = 0.0;
    for (int y = 0; y < ycard; ++y) {
      const std::size_t cell = static_cast<std::size_t>(x) * ycard + y;
      rows[cell] = std::exp(logits[cell] - maxlogit);
      z += rows[cell];
    }
    for (int y = 0; y < ycard; ++y) rows[static_cast<std::size_t>(x) * ycard + y] /= z;
  }
  return Channel(space, std::move(rows));
}

}  // namespace syndec
