#pragma once

#include <string>
#include <utility>

#include "syndec/core.hpp"

namespace syndec {

/// A problem instance as it appears on disk: an input distribution
/// together with a channel on the same space.
struct ChannelFile {
  InputDistribution input;
  Channel channel;
};

/// Parses a JSON document of the form
///
///   {
///     "input_cardinalities": [2, 2],
///     "output_cardinality": 2,
///     "input_distribution": [0.25, 0.25, 0.25, 0.25],
///     "kernel": [[1, 0], [1, 0], [1, 0], [0, 1]]
///   }
///
/// "kernel" holds one row per input tuple, tuples ordered with the first
/// input most significant. Rows and the input distribution must be
/// nonnegative and sum to one within 1e-9; sums within 1e-12 are kept
/// bit-for-bit, larger drifts are renormalized. Throws validation_error
/// on malformed documents.
ChannelFile parse_channel_text(const std::string& text);

/// Reads `path` and parses it with parse_channel_text. Throws
/// validation_error if the file cannot be read.
ChannelFile parse_channel_file(const std::string& path);

/// Serializes the instance in the format parse_channel_text accepts.
/// Probabilities are written with enough digits to round-trip exactly.
std::string write_channel_text(const InputDistribution& p, const Channel& k);

/// Writes write_channel_text output to `path`. Throws validation_error
/// if the file cannot be written.
void write_channel_file(const std::string& path, const InputDistribution& p, const Channel& k);

}  // namespace syndec
