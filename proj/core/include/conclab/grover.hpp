#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "conclab/request.hpp"

namespace conclab {

using Rng = std::mt19937_64;

/// Marked-item oracle for one search session. Indices are 0-based within
/// the domain. Every oracle evaluation is tallied: one per amplitude-flip
/// iteration, one per measured-index verification. Marked items are held
/// sparsely so domains far beyond statevector reach stay cheap.
class Oracle {
 public:
  explicit Oracle(int domain_size);

  /// Domain over the 1-based input window [lo, hi] of a request; window
  /// offset i-lo becomes domain index. An empty window (hi < lo) is fine.
  static Oracle from_request_window(const Request& req, int lo, int hi);

  int domain_size() const { return domain_; }
  int marked_count() const { return static_cast<int>(items_.size()); }
  const std::vector<int>& marked_items() const { return items_; }

  void mark(int index);
  void unmark(int index);
  bool is_marked(int index) const;

  /// One verification query: counted.
  bool query(int index) {
    ++query_count_;
    return is_marked(index);
  }
  /// One Grover iteration's oracle evaluation: counted.
  void count_iteration() { ++query_count_; }
  /// Bulk charge used by the cost-model engine.
  void charge(std::int64_t queries) { query_count_ += queries; }

  std::int64_t query_count() const { return query_count_; }

 private:
  void check(int index) const;

  int domain_ = 0;
  std::vector<int> items_;          // unordered
  std::vector<std::int32_t> slot_;  // index -> position in items_, or -1
  std::int64_t query_count_ = 0;
};

/// Real statevector over the N domain basis states. The search operators
/// used here (phase flip, inversion about the mean) keep amplitudes real.
struct Amplitudes {
  std::vector<double> v;

  static Amplitudes uniform(int n);
  void reset_uniform();
  double norm_squared() const;
};

/// One Grover step: phase-flip the marked amplitudes, then invert every
/// amplitude about the mean. The diffusion runs over exactly N states (no
/// power-of-two padding), so any domain size is simulated exactly. Counts
/// one oracle query.
void grover_iterate(Amplitudes& amps, Oracle& oracle);

/// Samples a basis index with probability proportional to amplitude^2.
int sample_measurement(const Amplitudes& amps, Rng& rng);

struct GroverOutcome {
  std::optional<int> found;
  std::int64_t queries_used = 0;
  int attempts = 0;
};

/// Default per-search iteration budget, ceil(3*sqrt(N)).
std::int64_t default_search_budget(int domain_size);

/// Search with an unknown number of marked items: grow a cutoff by the
/// factor 6/5 starting at 1 (capped at sqrt(N)), each round running a
/// uniformly drawn number of iterations below the cutoff from the uniform
/// state, measuring, and verifying. Returns none once the cumulative
/// iteration count exceeds the budget.
GroverOutcome bbht_search(Oracle& oracle, Rng& rng,
                          std::int64_t iteration_budget);

/// Query-count distributions of bbht_search runs-to-success, measured on a
/// (domain, marked) grid with the statevector engine.
struct CalibrationEntry {
  int domain = 0;
  int marked = 0;
  double mean_queries = 0.0;
  double stdev_queries = 0.0;
};

struct QueryEstimate {
  double mean = 0.0;
  double stdev = 0.0;
};

class CalibrationTable {
 public:
  CalibrationTable() = default;
  static CalibrationTable from_rows(std::vector<CalibrationEntry> rows);
  /// Throws std::runtime_error when the file is missing or malformed.
  static CalibrationTable load(const std::string& path);
  void save(const std::string& path) const;
  std::string to_csv() const;

  bool empty() const { return rows_.empty(); }
  const std::vector<CalibrationEntry>& rows() const { return rows_; }

  /// Mean/stdev for (domain, marked>=1); interpolates in log space between
  /// grid points, and extrapolates along constant sqrt(domain/marked) for
  /// domains beyond the grid.
  QueryEstimate lookup(int domain, int marked) const;

 private:
  QueryEstimate lookup_at_domain(size_t domain_idx, double marked) const;

  std::vector<CalibrationEntry> rows_;
  std::vector<int> domains_;                       // ascending
  std::vector<std::vector<CalibrationEntry>> by_domain_;  // k ascending
};

struct CalibrationGrid {
  int min_domain = 4;
  int max_domain = 4096;
  int trials = 400;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

/// Runs bbht_search to success `trials` times per (N, k) grid point, N and
/// k swept in powers of two, and records query-count means and stdevs.
CalibrationTable run_calibration(const CalibrationGrid& grid, int threads = 0);

/// Interchangeable search engines: exact statevector simulation, or a
/// calibrated sampler that charges realistic query counts without touching
/// amplitudes.
class GroverEngine {
 public:
  virtual ~GroverEngine() = default;
  virtual GroverOutcome search(Oracle& oracle, Rng& rng,
                               std::int64_t iteration_budget) = 0;
  virtual std::string name() const = 0;
};

/// Largest domain the statevector engine accepts.
inline constexpr int kStatevectorDomainLimit = 1 << 20;

class StatevectorEngine final : public GroverEngine {
 public:
  GroverOutcome search(Oracle& oracle, Rng& rng,
                       std::int64_t iteration_budget) override;
  std::string name() const override { return "statevector"; }
};

class CostModelEngine final : public GroverEngine {
 public:
  explicit CostModelEngine(CalibrationTable table);
  GroverOutcome search(Oracle& oracle, Rng& rng,
                       std::int64_t iteration_budget) override;
  std::string name() const override { return "cost-model"; }
  const CalibrationTable& table() const { return table_; }

 private:
  CalibrationTable table_;
};

/// Cost-model search against an explicit table (same behavior as
/// CostModelEngine::search).
GroverOutcome cost_model_search(Oracle& oracle, Rng& rng,
                                const CalibrationTable& table,
                                std::int64_t iteration_budget);

struct FindAllResult {
  std::vector<int> found;  // discovery order
  std::int64_t total_queries = 0;
};

/// Enumerates the marked set: search, record, unmark, repeat. Stops after
/// ceil(ln(max(found,2)/delta)) consecutive budget-exhausted searches, so
/// with probability at least 1-delta the returned list is the whole marked
/// set. Found items are always genuinely marked (soundness is
/// unconditional). budget <= 0 selects the default per-search budget.
FindAllResult find_all_marked(GroverEngine& engine, Oracle& oracle, Rng& rng,
                              double delta, std::int64_t budget = 0);

}  // namespace conclab
