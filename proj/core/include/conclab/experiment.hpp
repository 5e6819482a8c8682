#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "conclab/grover.hpp"
#include "conclab/topology.hpp"

namespace conclab {

enum class RouterChoice { Classical, Quantum, Both };
enum class EngineChoice { Statevector, CostModel };

std::string to_string(RouterChoice choice);
std::string to_string(EngineChoice choice);

struct SweepInstance {
  TopologyKind kind = TopologyKind::FullFatSlim;
  int n = 0;
  int m = 0;
  int q = 0;  // bounded
  int p = 0;  // regular (must satisfy n = p*m)
};

enum class RequestGen {
  Random,     // uniform actives over all inputs, then completed
  RandomFat,  // full kind only: actives drawn from the fat window
  Exhaustive  // every request in the certified regime
};

struct ExperimentSpec {
  std::vector<SweepInstance> instances;
  RequestGen gen = RequestGen::Random;
  /// Active count before completion; -1 selects the instance capacity.
  int request_actives = -1;
  RouterChoice router = RouterChoice::Classical;
  EngineChoice engine = EngineChoice::Statevector;
  int trials = 1;
  double delta = 0.01;
  std::uint64_t seed = 1;
  std::int64_t budget = 0;  // per-search override, 0 = default
};

struct ResultRow {
  int n = 0;
  int m = 0;
  int k = 0;
  std::string router;
  std::string engine;
  int trial = 0;
  std::int64_t quantum_queries = 0;
  std::int64_t classical_steps = 0;
  bool valid = false;
  bool failed = false;
  std::uint64_t seed = 0;
};

inline constexpr const char* kCsvHeader =
    "n,m,k,router,engine,trial,quantum_queries,classical_steps,valid,failed,"
    "seed";

/// splitmix64 of (base, salt); used everywhere a derived seed is needed so
/// reruns reproduce rows exactly regardless of worker count.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt);

/// Worker-pool width: CONCLAB_THREADS when set, hardware otherwise.
int worker_count();

/// Runs every (instance, trial, router) cell of the spec in a worker pool.
/// Rows come back in deterministic order. `table` is required for the
/// cost-model engine; threads <= 0 selects worker_count().
std::vector<ResultRow> run_sweep(const ExperimentSpec& spec,
                                 const CalibrationTable* table = nullptr,
                                 int threads = 0);

std::string rows_to_csv(const std::vector<ResultRow>& rows);
void write_csv(const std::string& path, const std::vector<ResultRow>& rows);

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

/// Least-squares line through (ln x, ln y); entries with x or y <= 0 are
/// skipped.
LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y);

struct SweepSummary {
  /// (n, mean classical steps), ascending n.
  std::vector<std::pair<double, double>> classical_points;
  /// (n, m, k, mean quantum queries) per (n, m, k) group, ascending n.
  std::vector<std::array<double, 4>> quantum_points;
  std::optional<LogLogFit> classical_fit;  // steps vs n
  std::optional<LogLogFit> quantum_fit;    // queries vs sqrt(n*k)*ln(k)
  /// Same queries against the k-insensitive form sqrt(n*m)*ln(m).
  std::optional<LogLogFit> quantum_fit_worst_case;
  std::optional<double> crossover_n;       // quantum mean drops below classical
};

SweepSummary summarize(const std::vector<ResultRow>& rows);

/// Draws k distinct integers from [lo, hi], uniformly, in O(k) expected time.
std::vector<int> sample_distinct(Rng& rng, int lo, int hi, int k);

}  // namespace conclab
