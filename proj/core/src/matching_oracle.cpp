#include "conclab/matching_oracle.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace conclab {
namespace {

struct Matcher {
  const Concentrator& conc;
  std::vector<int> match_of_output;  // output -> input, 0 when free
  std::vector<int> stamp;            // per output
  int tick = 0;

  explicit Matcher(const Concentrator& c)
      : conc(c),
        match_of_output(static_cast<size_t>(c.outputs()) + 1, 0),
        stamp(static_cast<size_t>(c.outputs()) + 1, 0) {}

  bool try_place(int input) {
    for (int output : conc.neighbors(input)) {
      if (stamp[static_cast<size_t>(output)] == tick) continue;
      stamp[static_cast<size_t>(output)] = tick;
      const int holder = match_of_output[static_cast<size_t>(output)];
      if (holder == 0 || try_place(holder)) {
        match_of_output[static_cast<size_t>(output)] = input;
        return true;
      }
    }
    return false;
  }
};

}  // namespace

MatchingResult max_matching(const Concentrator& conc,
                            std::span<const int> active_inputs) {
  std::vector<int> actives(active_inputs.begin(), active_inputs.end());
  std::sort(actives.begin(), actives.end());
  actives.erase(std::unique(actives.begin(), actives.end()), actives.end());

  Matcher matcher(conc);
  MatchingResult res;
  for (int input : actives) {
    ++matcher.tick;
    if (matcher.try_place(input)) ++res.size;
  }
  for (int output = 1; output <= conc.outputs(); ++output) {
    const int input = matcher.match_of_output[static_cast<size_t>(output)];
    if (input != 0) res.pairs.emplace_back(input, output);
  }
  std::sort(res.pairs.begin(), res.pairs.end());
  return res;
}

long long binomial_capped(int n, int k, long long cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long result = 1;
  for (int i = 1; i <= k; ++i) {
    // result *= (n - k + i) / i, guarding overflow against the cap
    const long long numerator = n - k + i;
    if (result > (cap * i) / numerator + 1) return cap + 1;
    result = result * numerator / i;
    if (result > cap) return cap + 1;
  }
  return result;
}

namespace {

// Lexicographic next combination over 0-based indices.
bool next_combination(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[static_cast<size_t>(i)] < n - k + i) {
      ++idx[static_cast<size_t>(i)];
      for (int j = i + 1; j < k; ++j)
        idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j) - 1] + 1;
      return true;
    }
  }
  return false;
}

std::optional<std::vector<int>> scan_for_failure(const Concentrator& conc,
                                                 int subset_size,
                                                 CertifyMode mode,
                                                 long long budget,
                                                 std::uint64_t seed,
                                                 long long& checked) {
  const int n = conc.inputs();
  if (subset_size > n) return std::nullopt;
  if (mode == CertifyMode::Exhaustive) {
    std::vector<int> idx(static_cast<size_t>(subset_size));
    for (int i = 0; i < subset_size; ++i) idx[static_cast<size_t>(i)] = i;
    std::vector<int> subset(static_cast<size_t>(subset_size));
    do {
      for (int i = 0; i < subset_size; ++i)
        subset[static_cast<size_t>(i)] = idx[static_cast<size_t>(i)] + 1;
      ++checked;
      if (max_matching(conc, subset).size != subset_size) return subset;
    } while (next_combination(idx, n));
    return std::nullopt;
  }

  std::mt19937_64 rng(seed);
  std::vector<int> pool(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) pool[static_cast<size_t>(i)] = i + 1;
  std::vector<int> subset(static_cast<size_t>(subset_size));
  for (long long t = 0; t < budget; ++t) {
    for (int i = 0; i < subset_size; ++i) {
      const int j = static_cast<int>(
          std::uniform_int_distribution<size_t>(i, pool.size() - 1)(rng));
      std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
      subset[static_cast<size_t>(i)] = pool[static_cast<size_t>(i)];
    }
    ++checked;
    if (max_matching(conc, subset).size != subset_size) return subset;
  }
  return std::nullopt;
}

}  // namespace

CapacityCertificate certify_capacity(const Concentrator& conc, int c_claim,
                                     CertifyMode mode, long long budget,
                                     std::uint64_t seed,
                                     bool find_extension_witness) {
  if (c_claim < 0 || c_claim > conc.outputs())
    throw std::invalid_argument("capacity claim " + std::to_string(c_claim) +
                                " exceeds output count " +
                                std::to_string(conc.outputs()));
  if (budget < 1) throw std::invalid_argument("budget must be positive");

  CapacityCertificate cert;
  cert.claimed_c = c_claim;
  cert.mode = mode;

  if (mode == CertifyMode::Exhaustive) {
    const long long combos = binomial_capped(conc.inputs(), c_claim, budget);
    if (combos > budget) {
      std::ostringstream msg;
      msg << "exhaustive certification needs C(" << conc.inputs() << ", "
          << c_claim << ") > " << budget
          << " subset checks; raise the budget or use sampled mode";
      throw BudgetExceeded(msg.str());
    }
  }

  cert.failing_subset = scan_for_failure(conc, c_claim, mode, budget, seed,
                                         cert.subsets_checked);
  cert.certified = !cert.failing_subset.has_value();

  if (cert.certified && find_extension_witness && c_claim < conc.outputs()) {
    long long extra_checked = 0;
    const long long combos =
        binomial_capped(conc.inputs(), c_claim + 1, budget);
    const CertifyMode witness_mode =
        combos > budget ? CertifyMode::Sampled : CertifyMode::Exhaustive;
    cert.extension_witness = scan_for_failure(conc, c_claim + 1, witness_mode,
                                              budget, seed + 1, extra_checked);
  }
  return cert;
}

CrosspointReport check_crosspoint_bounds(const Concentrator& conc) {
  CrosspointReport report;
  report.count = conc.crosspoint_count();
  const long long n = conc.inputs();
  const long long m = conc.outputs();
  std::ostringstream summary;
  switch (conc.kind()) {
    case TopologyKind::FullFatSlim: {
      const long long expected = (n - m + 1) * m;
      report.pass = report.count == expected;
      summary << "count=" << report.count << " expected=" << expected;
      break;
    }
    case TopologyKind::BoundedFatSlim: {
      const long long c = conc.capacity();
      const long long lower = (n - c + 1) * m / (m - c + 1);
      report.pass = report.count <= 2 * lower;
      summary << "count=" << report.count << " lower-bound=" << lower
              << " twice-bound=" << 2 * lower
              << " (count >= lower reported, not asserted: "
              << (report.count >= lower ? "holds" : "does not hold") << ")";
      break;
    }
    case TopologyKind::RegularFatSlim: {
      const long long expected = m * (n - m + 1);
      report.pass = report.count == expected;
      summary << "count=" << report.count << " expected=" << expected;
      break;
    }
  }
  report.summary = summary.str();
  return report;
}

EquivalenceReport router_equivalence(const Concentrator& conc,
                                     const Request& req,
                                     const RouterFn& router) {
  EquivalenceReport report;
  const Assignment asg = router(conc, req);
  report.router_size = static_cast<int>(asg.pairs.size());
  report.validity = validate_assignment(conc, req, asg);
  const std::vector<int> actives = req.active_list();
  report.oracle_size = max_matching(conc, actives).size;
  report.pass = report.validity.valid && report.router_size == report.oracle_size;
  return report;
}

}  // namespace conclab
