#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "conclab/request.hpp"
#include "conclab/step_ledger.hpp"
#include "conclab/topology.hpp"

namespace conclab {

struct RouteResult {
  Assignment assignment;
  StepLedger ledger;
  /// Active inputs the router could not place. Empty inside the certified
  /// regime; populated in best-effort bounded routing when k exceeds c.
  std::vector<int> unrouted;
};

/// Running sums: out[j] = bits[0] + ... + bits[j].
std::vector<int> prefix_sum(const std::vector<int>& bits);

/// Reindexing permutation used by the regular router when no section holds
/// more than m - m/p active inputs. Entry j-1 describes section j:
///   a[j] = 1 iff section j holds more than m/p active inputs,
///   r = prefix sums of a, s = prefix sums of not-a,
///   d[j] = a[j]*r[j] + (1-a[j])*(s[j] + r[p]).
/// d is a permutation of 1..p that ranks the a=1 sections first, keeping
/// original order within each group.
struct ReindexPlan {
  std::vector<int> a;
  std::vector<int> r;
  std::vector<int> s;
  std::vector<int> d;
};

ReindexPlan compute_reindex_plan(const std::vector<int>& section_sizes, int m,
                                 int p);

struct RegularRouteDetail {
  bool case_a = false;
  int case_a_section = 0;
  std::optional<ReindexPlan> plan;
  /// Times the tail pairing had to skip ahead past an incompatible output.
  int guard_swaps = 0;
  /// Times the forward scan found nothing and an alternating-path repair ran.
  int guard_augments = 0;
};

struct RegularRouteResult {
  Assignment assignment;
  StepLedger ledger;
  RegularRouteDetail detail;
};

/// Routes a completed m-request on a full fat-and-slim concentrator: slim
/// active i goes to output i, fat actives are paired left to right with the
/// idle outputs collected top to bottom.
RouteResult route_full_classical(const Concentrator& conc, const Request& req);

/// Routes up to c actives on a bounded fat-and-slim concentrator: slim
/// active i takes output i; each fat active probes its stride-q outputs and
/// takes the first idle one. Requests with k > c are attempted best-effort
/// and leftovers are reported in `unrouted`.
RouteResult route_bounded_classical(const Concentrator& conc,
                                    const Request& req);

/// Routes a completed m-request on a regular fat-and-slim concentrator.
RegularRouteResult route_regular_classical(const Concentrator& conc,
                                           const Request& req);

// Building blocks shared with the quantum routers. The quantum variants
// differ only in how active inputs are discovered, so the pairing logic
// lives here once.

/// Slim pass of the full router: pairs slim actives with their diagonal
/// outputs and returns the idle outputs in top-to-bottom order.
std::deque<int> route_full_slim(const Concentrator& conc, const Request& req,
                                Assignment& asg, StepLedger& ledger);

/// Stride scan of the bounded router's fat section. `fat_locals` holds
/// 1-based fat column indices; `output_idle` is the m+1 sized idle map.
void pair_bounded_fat(const Concentrator& conc,
                      const std::vector<int>& fat_locals,
                      std::vector<std::uint8_t>& output_idle, Assignment& asg,
                      StepLedger& ledger, std::vector<int>& unrouted);

/// Case split and pairing of the regular router, starting from per-section
/// active lists (entry j-1 holds section j's active local indices in
/// whatever discovery order the caller produced).
RegularRouteResult route_regular_sections(
    const Concentrator& conc, std::vector<std::vector<int>> section_actives,
    StepLedger ledger);

}  // namespace conclab
