#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "conclab/request.hpp"

namespace conclab {

struct MatchingResult {
  int size = 0;
  std::vector<std::pair<int, int>> pairs;  // sorted by input
};

/// Maximum bipartite matching between the given active inputs and the
/// outputs, by augmenting paths over the stored adjacency. Kept deliberately
/// independent of every construction formula so it can referee them;
/// requires explicit adjacency storage.
MatchingResult max_matching(const Concentrator& conc,
                            std::span<const int> active_inputs);

enum class CertifyMode { Exhaustive, Sampled };

/// Raised when an exhaustive certification would need more subset checks
/// than the caller's budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CapacityCertificate {
  int claimed_c = 0;
  bool certified = false;
  CertifyMode mode = CertifyMode::Exhaustive;
  long long subsets_checked = 0;
  /// Set when certification failed: a claimed_c-subset with no full matching.
  std::optional<std::vector<int>> failing_subset;
  /// Optionally searched after success: a (claimed_c+1)-subset with no full
  /// matching, witnessing that the capacity is not larger.
  std::optional<std::vector<int>> extension_witness;
};

/// Certifies that every active set of size exactly c_claim can be fully
/// matched (smaller sizes follow from matching monotonicity). Exhaustive
/// mode enumerates all C(n, c_claim) subsets and throws BudgetExceeded when
/// that count tops the budget; Sampled mode draws `budget` random subsets.
CapacityCertificate certify_capacity(const Concentrator& conc, int c_claim,
                                     CertifyMode mode,
                                     long long budget = 1'000'000,
                                     std::uint64_t seed = 1,
                                     bool find_extension_witness = false);

struct CrosspointReport {
  long long count = 0;
  bool pass = false;
  std::string summary;
};

/// Full: count must equal (n-m+1)*m. Bounded: count must stay within twice
/// floor((n-c+1)m/(m-c+1)); the lower-bound side is reported, not asserted.
/// Regular: count must equal m*(n-m+1).
CrosspointReport check_crosspoint_bounds(const Concentrator& conc);

struct EquivalenceReport {
  bool pass = false;
  int router_size = 0;
  int oracle_size = 0;
  ValidityReport validity;
};

using RouterFn =
    std::function<Assignment(const Concentrator&, const Request&)>;

/// Runs the router and checks its assignment validates and matches the
/// maximum matching size over the same active set.
EquivalenceReport router_equivalence(const Concentrator& conc,
                                     const Request& req,
                                     const RouterFn& router);

/// C(n, k) clamped at `cap` to avoid overflow during budget checks.
long long binomial_capped(int n, int k, long long cap);

}  // namespace conclab
