#include "syndec/hierarchy.hpp"

#include <numeric>

namespace syndec {

std::vector<std::vector<int>> subsets_of_order(int n, int i) {
  if (n < 0 || i < 0 || i > n) throw validation_error("subsets_of_order: invalid order");
  std::vector<std::vector<int>> out;
  std::vector<int> current(static_cast<std::size_t>(i));
  std::iota(current.begin(), current.end(), 0);
  if (i == 0) {
    out.push_back({});
    return out;
  }
  while (true) {
    out.push_back(current);
    // Advance to the next combination in lexicographic order.
    int pos = i - 1;
    while (pos >= 0 && current[pos] == n - i + pos) --pos;
    if (pos < 0) break;
    ++current[pos];
    for (int j = pos + 1; j < i; ++j) current[j] = current[j - 1] + 1;
  }
  return out;
}

ConstraintSet constraint_set(const InputDistribution& p, const Channel& k, int order) {
  if (!(p.space() == k.space())) throw validation_error("constraint_set: space mismatch");
  const ChannelSpace& s = p.space();
  if (order < 0 || order > s.num_inputs()) {
    throw validation_error("constraint_set: order out of range");
  }
  const JointDistribution joint = compose_joint(p, k);

  ConstraintSet cs;
  cs.order = order;
  std::vector<int> full(static_cast<std::size_t>(s.num_inputs()));
  std::iota(full.begin(), full.end(), 0);
  cs.constraints.push_back({full, false, marginalize(joint, full, false)});
  for (const std::vector<int>& subset : subsets_of_order(s.num_inputs(), order)) {
    cs.constraints.push_back({subset, true, marginalize(joint, subset, true)});
  }
  return cs;
}

}  // namespace syndec
