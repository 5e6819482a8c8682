#include "conclab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "conclab/classical_routing.hpp"
#include "conclab/matching_oracle.hpp"
#include "conclab/quantum_routing.hpp"

namespace conclab {
namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

constexpr long long kExplicitSweepLimit = 1LL << 22;
constexpr long long kExhaustiveRequestCap = 200'000;

Concentrator build_instance(const SweepInstance& inst) {
  AdjacencyStorage storage = AdjacencyStorage::Explicit;
  long long crosspoints = 0;
  switch (inst.kind) {
    case TopologyKind::FullFatSlim:
      crosspoints = static_cast<long long>(inst.n - inst.m + 1) * inst.m;
      break;
    case TopologyKind::BoundedFatSlim:
      crosspoints = static_cast<long long>(inst.n) + inst.m;
      break;
    case TopologyKind::RegularFatSlim:
      crosspoints = static_cast<long long>(inst.m) * (inst.n - inst.m + 1);
      break;
  }
  if (crosspoints > kExplicitSweepLimit) storage = AdjacencyStorage::Formulaic;
  switch (inst.kind) {
    case TopologyKind::FullFatSlim:
      return build_full_fat_slim(inst.n, inst.m, storage);
    case TopologyKind::BoundedFatSlim:
      return build_bounded_fat_slim(inst.n, inst.m, inst.q, storage);
    case TopologyKind::RegularFatSlim: {
      const int p = inst.p > 0 ? inst.p : (inst.m > 0 ? inst.n / inst.m : 0);
      require(p > 0 && p * inst.m == inst.n,
              "regular sweep instance needs n = p*m");
      return build_regular_fat_slim(p, inst.m, storage);
    }
  }
  throw std::logic_error("unreachable");
}

int default_actives(const Concentrator& conc) {
  return conc.kind() == TopologyKind::BoundedFatSlim ? conc.capacity()
                                                     : conc.outputs();
}

Request make_request(const Concentrator& conc, RequestGen gen, int actives,
                     Rng& rng) {
  const int n = conc.inputs();
  switch (gen) {
    case RequestGen::Random: {
      Request req(n);
      for (int input : sample_distinct(rng, 1, n, actives))
        req.set_active(input, true);
      if (conc.kind() != TopologyKind::BoundedFatSlim)
        req = complete_request(conc, req);
      return req;
    }
    case RequestGen::RandomFat: {
      require(conc.kind() == TopologyKind::FullFatSlim,
              "fat-window generation applies to full concentrators only");
      const int fat = n - conc.outputs();
      require(actives <= fat, "fat window smaller than requested active count");
      Request req(n);
      for (int input : sample_distinct(rng, 1, fat, actives))
        req.set_active(input, true);
      return complete_request(conc, req);
    }
    case RequestGen::Exhaustive:
      throw std::logic_error("exhaustive requests are pre-enumerated");
  }
  throw std::logic_error("unreachable");
}

std::vector<Request> enumerate_requests(const Concentrator& conc) {
  const int n = conc.inputs();
  std::vector<Request> out;
  auto emit_size = [&](int size) {
    std::vector<int> idx(static_cast<size_t>(size));
    for (int i = 0; i < size; ++i) idx[static_cast<size_t>(i)] = i;
    while (true) {
      Request req(n);
      for (int i : idx) req.set_active(i + 1, true);
      out.push_back(std::move(req));
      int pos = size - 1;
      while (pos >= 0 && idx[static_cast<size_t>(pos)] == n - size + pos) --pos;
      if (pos < 0) break;
      ++idx[static_cast<size_t>(pos)];
      for (int t = pos + 1; t < size; ++t)
        idx[static_cast<size_t>(t)] = idx[static_cast<size_t>(t) - 1] + 1;
    }
  };

  if (conc.kind() == TopologyKind::BoundedFatSlim) {
    long long total = 0;
    for (int k = 0; k <= conc.capacity(); ++k)
      total += binomial_capped(n, k, kExhaustiveRequestCap);
    require(total <= kExhaustiveRequestCap,
            "exhaustive request set too large; use random generation");
    for (int k = 0; k <= conc.capacity(); ++k) emit_size(k);
  } else {
    const long long total =
        binomial_capped(n, conc.outputs(), kExhaustiveRequestCap);
    require(total <= kExhaustiveRequestCap,
            "exhaustive request set too large; use random generation");
    emit_size(conc.outputs());
  }
  return out;
}

}  // namespace

std::string to_string(RouterChoice choice) {
  switch (choice) {
    case RouterChoice::Classical: return "classical";
    case RouterChoice::Quantum: return "quantum";
    case RouterChoice::Both: return "both";
  }
  return "unknown";
}

std::string to_string(EngineChoice choice) {
  switch (choice) {
    case EngineChoice::Statevector: return "statevector";
    case EngineChoice::CostModel: return "cost-model";
  }
  return "unknown";
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int worker_count() {
  if (const char* env = std::getenv("CONCLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return std::min(v, 256);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(std::min(hw, 64u)) : 4;
}

std::vector<int> sample_distinct(Rng& rng, int lo, int hi, int k) {
  const int range = hi - lo + 1;
  require(k >= 0 && k <= range, "cannot sample more values than the range");
  // Floyd's algorithm.
  std::unordered_set<int> chosen;
  chosen.reserve(static_cast<size_t>(k) * 2);
  std::vector<int> out;
  out.reserve(static_cast<size_t>(k));
  for (int j = range - k + 1; j <= range; ++j) {
    const int t = std::uniform_int_distribution<int>(1, j)(rng);
    if (chosen.insert(t).second) {
      out.push_back(lo + t - 1);
    } else {
      chosen.insert(j);
      out.push_back(lo + j - 1);
    }
  }
  return out;
}

std::vector<ResultRow> run_sweep(const ExperimentSpec& spec,
                                 const CalibrationTable* table, int threads) {
  require(!spec.instances.empty(), "sweep needs at least one instance");
  require(spec.trials >= 1 || spec.gen == RequestGen::Exhaustive,
          "trials must be positive");
  require(spec.delta > 0.0 && spec.delta < 1.0, "delta must lie in (0, 1)");

  const bool wants_quantum = spec.router != RouterChoice::Classical;
  if (wants_quantum && spec.engine == EngineChoice::CostModel)
    require(table != nullptr && !table->empty(),
            "cost-model sweeps need a calibration table");

  std::vector<Concentrator> concs;
  concs.reserve(spec.instances.size());
  for (const auto& inst : spec.instances) concs.push_back(build_instance(inst));

  if (wants_quantum && spec.engine == EngineChoice::Statevector) {
    for (const auto& conc : concs) {
      const int window = conc.kind() == TopologyKind::BoundedFatSlim
                             ? std::max(conc.inputs() - conc.fat_width(),
                                        conc.fat_width())
                             : conc.inputs();
      require(window <= kStatevectorDomainLimit,
              "statevector engine refuses search windows above 2^20; pick the "
              "cost-model engine");
    }
  }

  // Pre-enumerated requests for exhaustive generation.
  std::vector<std::vector<Request>> enumerated(concs.size());
  std::vector<int> trials_per_instance(concs.size(), spec.trials);
  if (spec.gen == RequestGen::Exhaustive) {
    for (size_t i = 0; i < concs.size(); ++i) {
      enumerated[i] = enumerate_requests(concs[i]);
      trials_per_instance[i] = static_cast<int>(enumerated[i].size());
    }
  }

  struct Task {
    size_t instance;
    int trial;
    bool quantum;
  };
  std::vector<Task> tasks;
  for (size_t i = 0; i < concs.size(); ++i) {
    for (int t = 0; t < trials_per_instance[i]; ++t) {
      if (spec.router != RouterChoice::Quantum) tasks.push_back({i, t, false});
      if (spec.router != RouterChoice::Classical) tasks.push_back({i, t, true});
    }
  }

  std::vector<ResultRow> rows(tasks.size());
  StatevectorEngine statevector;
  std::optional<CostModelEngine> cost_model;
  if (wants_quantum && spec.engine == EngineChoice::CostModel)
    cost_model.emplace(*table);

  std::atomic<size_t> next{0};
  std::atomic<bool> poisoned{false};
  std::string first_error;
  std::mutex error_mutex;

  auto run_task = [&](const Task& task, ResultRow& row) {
    const Concentrator& conc = concs[task.instance];
    const std::uint64_t req_seed =
        mix_seed(mix_seed(spec.seed, task.instance), static_cast<std::uint64_t>(task.trial));
    Rng req_rng(req_seed);

    Request req(conc.inputs());
    if (spec.gen == RequestGen::Exhaustive) {
      req = enumerated[task.instance][static_cast<size_t>(task.trial)];
      if (conc.kind() != TopologyKind::BoundedFatSlim)
        req = complete_request(conc, req);
    } else {
      const int actives = spec.request_actives >= 0
                              ? spec.request_actives
                              : default_actives(conc);
      req = make_request(conc, spec.gen, actives, req_rng);
    }

    row.n = conc.inputs();
    row.m = conc.outputs();
    row.k = req.active_count();
    row.trial = task.trial;
    row.router = task.quantum ? "quantum" : "classical";

    const std::uint64_t run_seed = mix_seed(req_seed, task.quantum ? 2 : 1);
    row.seed = run_seed;

    if (!task.quantum) {
      row.engine = "none";
      switch (conc.kind()) {
        case TopologyKind::FullFatSlim: {
          RouteResult r = route_full_classical(conc, req);
          row.classical_steps = r.ledger.total();
          row.valid = validate_assignment(conc, req, r.assignment).valid;
          row.failed = !r.unrouted.empty();
          break;
        }
        case TopologyKind::BoundedFatSlim: {
          RouteResult r = route_bounded_classical(conc, req);
          row.classical_steps = r.ledger.total();
          row.valid = validate_assignment(conc, req, r.assignment).valid;
          row.failed = !r.unrouted.empty();
          break;
        }
        case TopologyKind::RegularFatSlim: {
          RegularRouteResult r = route_regular_classical(conc, req);
          row.classical_steps = r.ledger.total();
          row.valid = validate_assignment(conc, req, r.assignment).valid;
          row.failed = false;
          break;
        }
      }
      return;
    }

    row.engine = to_string(spec.engine);
    GroverEngine& engine =
        spec.engine == EngineChoice::CostModel
            ? static_cast<GroverEngine&>(*cost_model)
            : static_cast<GroverEngine&>(statevector);
    Rng rng(run_seed);
    QuantumRoutingResult r;
    switch (conc.kind()) {
      case TopologyKind::FullFatSlim:
        r = route_full_quantum(conc, req, engine, rng, spec.delta, spec.budget);
        break;
      case TopologyKind::BoundedFatSlim:
        r = route_bounded_quantum(conc, req, engine, rng, spec.delta,
                                  spec.budget);
        break;
      case TopologyKind::RegularFatSlim:
        r = route_regular_quantum(conc, req, engine, rng, spec.delta,
                                  spec.budget);
        break;
    }
    row.quantum_queries = r.quantum_queries;
    row.classical_steps = r.classical_steps.total();
    row.failed = r.failed;
    row.valid = validate_assignment(conc, req, r.assignment).valid;
  };

  auto worker = [&] {
    while (!poisoned.load(std::memory_order_relaxed)) {
      const size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) return;
      try {
        run_task(tasks[idx], rows[idx]);
      } catch (const std::exception& err) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!poisoned.exchange(true)) first_error = err.what();
        return;
      }
    }
  };

  int pool = threads > 0 ? threads : worker_count();
  pool = std::min<int>(pool, static_cast<int>(std::max<size_t>(tasks.size(), 1)));
  std::vector<std::thread> team;
  team.reserve(static_cast<size_t>(pool));
  for (int t = 0; t < pool; ++t) team.emplace_back(worker);
  for (auto& th : team) th.join();
  if (poisoned.load()) throw std::runtime_error("sweep failed: " + first_error);
  return rows;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& row : rows) {
    out << row.n << ',' << row.m << ',' << row.k << ',' << row.router << ','
        << row.engine << ',' << row.trial << ',' << row.quantum_queries << ','
        << row.classical_steps << ',' << (row.valid ? 1 : 0) << ','
        << (row.failed ? 1 : 0) << ',' << row.seed << '\n';
  }
  return out.str();
}

void write_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << rows_to_csv(rows);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), "fit needs matching coordinate counts");
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  LogLogFit fit;
  fit.points = static_cast<int>(lx.size());
  if (fit.points < 2) return fit;
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / n;
  for (size_t i = 0; i < lx.size(); ++i) {
    const double pred = fit.intercept + fit.slope * lx[i];
    ss_res += (ly[i] - pred) * (ly[i] - pred);
    ss_tot += (ly[i] - mean_y) * (ly[i] - mean_y);
  }
  fit.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

SweepSummary summarize(const std::vector<ResultRow>& rows) {
  SweepSummary summary;

  std::map<int, std::pair<double, long long>> classical_by_n;
  std::map<std::tuple<int, int, int>, std::pair<double, long long>>
      quantum_by_nmk;
  for (const auto& row : rows) {
    if (row.router == "classical") {
      auto& acc = classical_by_n[row.n];
      acc.first += static_cast<double>(row.classical_steps);
      acc.second += 1;
    } else if (row.router == "quantum") {
      auto& acc = quantum_by_nmk[{row.n, row.m, row.k}];
      acc.first += static_cast<double>(row.quantum_queries);
      acc.second += 1;
    }
  }

  for (const auto& [n, acc] : classical_by_n)
    summary.classical_points.push_back(
        {static_cast<double>(n), acc.first / static_cast<double>(acc.second)});
  for (const auto& [nmk, acc] : quantum_by_nmk)
    summary.quantum_points.push_back(
        {static_cast<double>(std::get<0>(nmk)),
         static_cast<double>(std::get<1>(nmk)),
         static_cast<double>(std::get<2>(nmk)),
         acc.first / static_cast<double>(acc.second)});

  if (summary.classical_points.size() >= 2) {
    std::vector<double> xs, ys;
    for (const auto& [n, steps] : summary.classical_points) {
      xs.push_back(n);
      ys.push_back(steps);
    }
    summary.classical_fit = fit_loglog(xs, ys);
  }

  {
    std::vector<double> xs, worst_xs, ys, worst_ys;
    for (const auto& [n, m, k, queries] : summary.quantum_points) {
      if (k >= 2.0) {
        xs.push_back(std::sqrt(n * k) * std::log(k));
        ys.push_back(queries);
      }
      if (m >= 2.0) {
        worst_xs.push_back(std::sqrt(n * m) * std::log(m));
        worst_ys.push_back(queries);
      }
    }
    if (xs.size() >= 2) summary.quantum_fit = fit_loglog(xs, ys);
    if (worst_xs.size() >= 2)
      summary.quantum_fit_worst_case = fit_loglog(worst_xs, worst_ys);
  }

  // Crossover over n values present for both routers.
  std::map<int, double> quantum_by_n;
  std::map<int, long long> quantum_counts;
  for (const auto& [n, m, k, queries] : summary.quantum_points) {
    (void)m;
    (void)k;
    quantum_by_n[static_cast<int>(n)] += queries;
    quantum_counts[static_cast<int>(n)] += 1;
  }
  std::optional<std::pair<double, double>> previous;  // (n, gap = q - c)
  for (const auto& [n, acc] : classical_by_n) {
    auto it = quantum_by_n.find(n);
    if (it == quantum_by_n.end()) continue;
    const double classical_mean = acc.first / static_cast<double>(acc.second);
    const double quantum_mean =
        it->second / static_cast<double>(quantum_counts[n]);
    const double gap = quantum_mean - classical_mean;
    if (gap < 0.0) {
      if (!previous || previous->second < 0.0) {
        summary.crossover_n = static_cast<double>(n);
      } else {
        // interpolate in log n between the straddling grid points
        const double t = previous->second / (previous->second - gap);
        summary.crossover_n =
            std::exp(std::log(previous->first) +
                     t * (std::log(n) - std::log(previous->first)));
      }
      break;
    }
    previous = {static_cast<double>(n), gap};
  }
  return summary;
}

}  // namespace conclab
