#pragma once

// Test-only helpers kept independent of the library's computation paths so
// they can act as oracles for it.

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

namespace testsupport {

/// Closed-form success probability of measuring a marked item after j
/// amplitude-amplification steps from the uniform state over N items with
/// k marked: sin^2((2j+1) * asin(sqrt(k/N))).
inline double grover_success_probability(int n, int k, int j) {
  const double theta = std::asin(std::sqrt(static_cast<double>(k) / n));
  const double s = std::sin((2.0 * j + 1.0) * theta);
  return s * s;
}

inline std::vector<int> sorted_copy(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

/// All size-k subsets of {1..n} in lexicographic order.
inline std::vector<std::vector<int>> subsets_of_size(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> idx(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i + 1;
  if (k == 0) {
    out.push_back({});
    return out;
  }
  while (true) {
    out.push_back(idx);
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<size_t>(pos)] == n - k + pos + 1) --pos;
    if (pos < 0) break;
    ++idx[static_cast<size_t>(pos)];
    for (int t = pos + 1; t < k; ++t)
      idx[static_cast<size_t>(t)] = idx[static_cast<size_t>(t) - 1] + 1;
  }
  return out;
}

}  // namespace testsupport
