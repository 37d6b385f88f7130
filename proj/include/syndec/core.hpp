// Finite probability primitives: input spaces, distributions, channels and
// joints, plus marginalization, entropy and the divergences everything else
// is built from. All internal computation is in nats; conversion to a
// reporting base happens only when a result leaves the library.

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace syndec {

/// Structural precondition failed (shape, normalization, range, subset index).
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A divergence is +infinity because absolute continuity fails. Raised as an
/// error instead of returning a floating-point infinity so that callers must
/// handle support violations explicitly.
struct infinite_divergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An iterative solver stopped without meeting its tolerance. Carries the
/// last residual and the number of cycles performed.
struct solver_error : std::runtime_error {
  solver_error(const std::string& message, double last_residual, long cycles_run)
      : std::runtime_error(message), residual(last_residual), cycles(cycles_run) {}
  double residual;
  long cycles;
};

/// Tolerance for normalization checks when objects are constructed.
inline constexpr double construction_tolerance = 1e-12;
/// Tolerance for normalization checks at operation boundaries.
inline constexpr double boundary_tolerance = 1e-9;

/// Shape of a channel: N finite input variables and one finite output.
/// Input tuples are flattened mixed-radix with the FIRST input most
/// significant; all input indices in the API are zero-based.
class ChannelSpace {
 public:
  ChannelSpace(std::vector<int> input_cardinalities, int output_cardinality);

  int num_inputs() const { return static_cast<int>(cards_.size()); }
  const std::vector<int>& input_cardinalities() const { return cards_; }
  int input_cardinality(int i) const;
  int output_cardinality() const { return out_; }

  /// Number of joint input tuples (product of input cardinalities).
  int input_size() const { return input_size_; }
  /// Number of (input tuple, output) cells.
  int joint_size() const { return input_size_ * out_; }

  int flatten(std::span<const int> digits) const;
  std::vector<int> unflatten(int index) const;
  /// Value of input variable i in the tuple with the given flattened index.
  int digit(int index, int i) const;

  bool operator==(const ChannelSpace& other) const = default;

 private:
  std::vector<int> cards_;
  int out_ = 0;
  int input_size_ = 0;
  std::vector<int> strides_;
};

/// Distribution over the input tuples of a space. Entries are nonnegative
/// and sum to 1 within construction_tolerance.
class InputDistribution {
 public:
  InputDistribution(ChannelSpace space, std::vector<double> table);
  static InputDistribution uniform(const ChannelSpace& space);

  const ChannelSpace& space() const { return space_; }
  const std::vector<double>& table() const { return table_; }
  double at(int x) const { return table_[static_cast<std::size_t>(x)]; }
  bool strictly_positive() const;

 private:
  ChannelSpace space_;
  std::vector<double> table_;
};

/// Row-stochastic kernel: one output distribution per input tuple, stored
/// row-major. Each row sums to 1 within construction_tolerance.
class Channel {
 public:
  Channel(ChannelSpace space, std::vector<double> rows);

  /// Channel that sends tuple x to output_of(digits of x) with probability 1.
  static Channel deterministic(
      const ChannelSpace& space,
      const std::function<int(std::span<const int>)>& output_of);
  /// Channel whose every row equals the given output distribution.
  static Channel constant(const ChannelSpace& space,
                          std::span<const double> output_distribution);

  const ChannelSpace& space() const { return space_; }
  const std::vector<double>& table() const { return rows_; }
  std::span<const double> row(int x) const;
  double at(int x, int y) const;

 private:
  ChannelSpace space_;
  std::vector<double> rows_;
};

/// Joint distribution over (input tuple, output) cells, stored row-major
/// like Channel. Sums to 1 within construction_tolerance.
class JointDistribution {
 public:
  JointDistribution(ChannelSpace space, std::vector<double> table);

  const ChannelSpace& space() const { return space_; }
  const std::vector<double>& table() const { return table_; }
  double at(int x, int y) const;

 private:
  ChannelSpace space_;
  std::vector<double> table_;
};

/// Joint p(x) * k(x;y).
JointDistribution compose_joint(const InputDistribution& p, const Channel& k);

/// Output distribution of the joint p(x) * k(x;y); length |Y|.
std::vector<double> pushforward(const InputDistribution& p, const Channel& k);

/// Size of the marginal table over (X_subset[, output]).
int marginal_size(const ChannelSpace& space, std::span<const int> subset,
                  bool include_output);

/// For each joint cell, the index of its cell in the marginal table over
/// (X_subset[, output]). Subset indices are zero-based and must be strictly
/// increasing. Marginal coordinates are ordered by increasing input index,
/// with the output last and least significant when included.
std::vector<int> marginal_index_map(const ChannelSpace& space,
                                    std::span<const int> subset,
                                    bool include_output);

/// Marginal of the joint onto (X_subset[, output]).
std::vector<double> marginalize(const JointDistribution& j,
                                std::span<const int> subset,
                                bool include_output);

/// Shannon entropy of a normalized table, in the given base.
double entropy(std::span<const double> table, double base = 2.0);

/// KL divergence between equal-length tables, in the given base.
/// Terms with a(i) = 0 contribute zero; a(i) > 0 with b(i) = 0 raises
/// infinite_divergence_error.
double kl_divergence(std::span<const double> a, std::span<const double> b,
                     double base = 2.0);

/// Divergence between channels weighted by an input distribution:
/// sum over x,y of p(x) k(x;y) log(k(x;y) / m(x;y)). Affine in p and obeys
/// the chain rule with input-distribution divergence; note this is not the
/// divergence of the pushforwards, which discards input information.
double channel_divergence(const InputDistribution& p, const Channel& k,
                          const Channel& m, double base = 2.0);

/// Mutual information between the input tuple and the output of a joint.
double mutual_information(const JointDistribution& j, double base = 2.0);

namespace detail {

double entropy_nats(std::span<const double> table);
double kl_nats(std::span<const double> a, std::span<const double> b);
double channel_divergence_nats(const InputDistribution& p, const Channel& k,
                               const Channel& m);
double mutual_information_nats(const JointDistribution& j);
/// log(base) used to convert nats into the reporting base.
double base_factor(double base);

}  // namespace detail

}  // namespace syndec
