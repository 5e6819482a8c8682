#include "conclab/grover.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace conclab {
namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double mean_of(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

double stdev_of(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double sum = 0.0;
  for (double x : xs) sum += (x - mean) * (x - mean);
  return std::sqrt(sum / static_cast<double>(xs.size() - 1));
}

}  // namespace

Oracle::Oracle(int domain_size) : domain_(domain_size) {
  require(domain_size >= 0, "oracle domain must be non-negative");
  slot_.assign(static_cast<size_t>(domain_size), -1);
}

Oracle Oracle::from_request_window(const Request& req, int lo, int hi) {
  require(lo >= 1 && hi <= req.size() && hi >= lo - 1,
          "window outside the request");
  Oracle oracle(hi - lo + 1);
  for (int input = lo; input <= hi; ++input)
    if (req.is_active(input)) oracle.mark(input - lo);
  return oracle;
}

void Oracle::check(int index) const {
  if (index < 0 || index >= domain_)
    throw std::out_of_range("oracle index " + std::to_string(index) +
                            " outside 0.." + std::to_string(domain_ - 1));
}

void Oracle::mark(int index) {
  check(index);
  if (slot_[static_cast<size_t>(index)] >= 0) return;
  slot_[static_cast<size_t>(index)] = static_cast<std::int32_t>(items_.size());
  items_.push_back(index);
}

void Oracle::unmark(int index) {
  check(index);
  const std::int32_t pos = slot_[static_cast<size_t>(index)];
  if (pos < 0) return;
  const int last = items_.back();
  items_[static_cast<size_t>(pos)] = last;
  slot_[static_cast<size_t>(last)] = pos;
  items_.pop_back();
  slot_[static_cast<size_t>(index)] = -1;
}

bool Oracle::is_marked(int index) const {
  check(index);
  return slot_[static_cast<size_t>(index)] >= 0;
}

Amplitudes Amplitudes::uniform(int n) {
  Amplitudes amps;
  amps.v.assign(static_cast<size_t>(n), 0.0);
  amps.reset_uniform();
  return amps;
}

void Amplitudes::reset_uniform() {
  if (v.empty()) return;
  const double a = 1.0 / std::sqrt(static_cast<double>(v.size()));
  std::fill(v.begin(), v.end(), a);
}

double Amplitudes::norm_squared() const {
  double sum = 0.0;
  for (double a : v) sum += a * a;
  return sum;
}

void grover_iterate(Amplitudes& amps, Oracle& oracle) {
  if (static_cast<int>(amps.v.size()) != oracle.domain_size())
    throw std::invalid_argument("amplitude count does not match oracle domain");
  for (int idx : oracle.marked_items())
    amps.v[static_cast<size_t>(idx)] = -amps.v[static_cast<size_t>(idx)];
  double sum = 0.0;
  for (double a : amps.v) sum += a;
  const double mean = sum / static_cast<double>(amps.v.size());
  for (double& a : amps.v) a = 2.0 * mean - a;
  oracle.count_iteration();
}

int sample_measurement(const Amplitudes& amps, Rng& rng) {
  if (amps.v.empty())
    throw std::invalid_argument("cannot measure an empty statevector");
  const double total = amps.norm_squared();
  double draw =
      std::uniform_real_distribution<double>(0.0, total)(rng);
  for (size_t i = 0; i < amps.v.size(); ++i) {
    draw -= amps.v[i] * amps.v[i];
    if (draw <= 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(amps.v.size()) - 1;
}

std::int64_t default_search_budget(int domain_size) {
  return static_cast<std::int64_t>(
      std::ceil(3.0 * std::sqrt(std::max(0, domain_size))));
}

GroverOutcome bbht_search(Oracle& oracle, Rng& rng,
                          std::int64_t iteration_budget) {
  GroverOutcome out;
  const int n = oracle.domain_size();
  if (n == 0) return out;
  const std::int64_t start = oracle.query_count();

  const double cap = std::max(1.0, std::sqrt(static_cast<double>(n)));
  double cutoff = 1.0;
  std::int64_t iterations = 0;
  // Rounds that happen to draw zero iterations never advance the budget;
  // the attempt cap keeps degenerate domains (N=1 with nothing marked)
  // from spinning forever.
  const std::int64_t attempt_cap = 64 + 2 * iteration_budget;

  Amplitudes amps = Amplitudes::uniform(n);
  while (true) {
    const int hi = static_cast<int>(std::ceil(cutoff));
    const int j = std::uniform_int_distribution<int>(0, hi - 1)(rng);
    amps.reset_uniform();
    for (int t = 0; t < j; ++t) grover_iterate(amps, oracle);
    const int idx = sample_measurement(amps, rng);
    ++out.attempts;
    if (oracle.query(idx)) {
      out.found = idx;
      break;
    }
    iterations += j;
    if (iterations > iteration_budget || out.attempts >= attempt_cap) break;
    cutoff = std::min(cutoff * 1.2, cap);
  }
  out.queries_used = oracle.query_count() - start;
  return out;
}

CalibrationTable CalibrationTable::from_rows(std::vector<CalibrationEntry> rows) {
  CalibrationTable table;
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.domain != b.domain ? a.domain < b.domain : a.marked < b.marked;
  });
  table.rows_ = std::move(rows);
  for (const auto& row : table.rows_) {
    require(row.domain >= 1 && row.marked >= 1 && row.marked <= row.domain,
            "calibration row out of range");
    if (table.domains_.empty() || table.domains_.back() != row.domain) {
      table.domains_.push_back(row.domain);
      table.by_domain_.emplace_back();
    }
    table.by_domain_.back().push_back(row);
  }
  return table;
}

CalibrationTable CalibrationTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error(
        "calibration table '" + path +
        "' is missing; run the calibrate command to generate it");
  std::vector<CalibrationEntry> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("N,", 0) == 0) continue;  // header
    CalibrationEntry row;
    std::istringstream fields(line);
    std::string token;
    try {
      std::getline(fields, token, ',');
      row.domain = std::stoi(token);
      std::getline(fields, token, ',');
      row.marked = std::stoi(token);
      std::getline(fields, token, ',');
      row.mean_queries = std::stod(token);
      std::getline(fields, token, ',');
      row.stdev_queries = std::stod(token);
    } catch (const std::exception&) {
      throw std::runtime_error("calibration table '" + path +
                               "': malformed row at line " +
                               std::to_string(line_no));
    }
    rows.push_back(row);
  }
  if (rows.empty())
    throw std::runtime_error("calibration table '" + path + "' has no rows");
  return from_rows(std::move(rows));
}

std::string CalibrationTable::to_csv() const {
  std::ostringstream out;
  out << "N,k,mean_queries,stdev\n";
  out.precision(6);
  out << std::fixed;
  for (const auto& row : rows_)
    out << row.domain << ',' << row.marked << ',' << row.mean_queries << ','
        << row.stdev_queries << '\n';
  return out.str();
}

void CalibrationTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << to_csv();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

QueryEstimate CalibrationTable::lookup_at_domain(size_t domain_idx,
                                                 double marked) const {
  const auto& rows = by_domain_[domain_idx];
  const double k = std::clamp(marked, static_cast<double>(rows.front().marked),
                              static_cast<double>(rows.back().marked));
  size_t hi = 0;
  while (hi < rows.size() && rows[hi].marked < k) ++hi;
  if (hi == 0) return {rows[0].mean_queries, rows[0].stdev_queries};
  if (hi == rows.size())
    return {rows.back().mean_queries, rows.back().stdev_queries};
  const auto& lo_row = rows[hi - 1];
  const auto& hi_row = rows[hi];
  if (hi_row.marked == lo_row.marked)
    return {hi_row.mean_queries, hi_row.stdev_queries};
  const double t = (std::log(k) - std::log(lo_row.marked)) /
                   (std::log(hi_row.marked) - std::log(lo_row.marked));
  return {lo_row.mean_queries + t * (hi_row.mean_queries - lo_row.mean_queries),
          lo_row.stdev_queries +
              t * (hi_row.stdev_queries - lo_row.stdev_queries)};
}

QueryEstimate CalibrationTable::lookup(int domain, int marked) const {
  if (empty())
    throw std::runtime_error("cost model requires a loaded calibration table");
  require(domain >= 1 && marked >= 1, "lookup needs domain >= 1, marked >= 1");
  const double k = std::min(marked, domain);

  const int max_domain = domains_.back();
  if (domain > max_domain) {
    // Scale along constant sqrt(domain/marked): same schedule shape.
    const double k_eq = k * static_cast<double>(max_domain) / domain;
    if (k_eq >= 1.0) return lookup_at_domain(domains_.size() - 1, k_eq);
    QueryEstimate edge = lookup_at_domain(domains_.size() - 1, 1.0);
    const double scale = std::sqrt(1.0 / k_eq);
    return {edge.mean * scale, edge.stdev * scale};
  }

  size_t hi = 0;
  while (hi < domains_.size() && domains_[hi] < domain) ++hi;
  if (hi == domains_.size()) hi = domains_.size() - 1;
  if (domains_[hi] == domain) return lookup_at_domain(hi, k);
  if (hi == 0) return lookup_at_domain(0, k);
  const QueryEstimate lo = lookup_at_domain(hi - 1, k);
  const QueryEstimate hi_est = lookup_at_domain(hi, k);
  const double t = (std::log(domain) - std::log(domains_[hi - 1])) /
                   (std::log(domains_[hi]) - std::log(domains_[hi - 1]));
  return {lo.mean + t * (hi_est.mean - lo.mean),
          lo.stdev + t * (hi_est.stdev - lo.stdev)};
}

CalibrationTable run_calibration(const CalibrationGrid& grid, int threads) {
  require(grid.min_domain >= 2 && grid.max_domain >= grid.min_domain,
          "calibration grid empty");
  require(grid.max_domain <= kStatevectorDomainLimit,
          "calibration grid exceeds the statevector limit");
  require(grid.trials >= 2, "calibration needs at least 2 trials per point");

  struct Point {
    int domain;
    int marked;
  };
  std::vector<Point> points;
  for (int n = grid.min_domain; n <= grid.max_domain; n *= 2) {
    for (int k = 1; k <= n; k *= 2) points.push_back({n, k});
    // a non-power-of-two n misses the all-marked edge in the k loop
    if ((n & (n - 1)) != 0) points.push_back({n, n});
  }

  std::vector<CalibrationEntry> rows(points.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    while (true) {
      const size_t idx = next.fetch_add(1);
      if (idx >= points.size()) return;
      const auto [n, k] = points[idx];
      Rng rng(grid.seed ^ (0x517cc1b727220a95ULL * (idx + 1)));
      std::vector<double> samples;
      samples.reserve(static_cast<size_t>(grid.trials));
      const std::int64_t budget = default_search_budget(n);
      for (int t = 0; t < grid.trials; ++t) {
        Oracle oracle(n);
        for (int i = 0; i < k; ++i) oracle.mark(i);
        std::int64_t queries = 0;
        while (true) {
          GroverOutcome out = bbht_search(oracle, rng, budget);
          queries += out.queries_used;
          if (out.found) break;
        }
        samples.push_back(static_cast<double>(queries));
      }
      const double mean = mean_of(samples);
      rows[idx] = {n, k, mean, stdev_of(samples, mean)};
    }
  };

  int pool = threads > 0 ? threads
                         : static_cast<int>(std::thread::hardware_concurrency());
  pool = std::clamp(pool, 1, 64);
  std::vector<std::thread> team;
  team.reserve(static_cast<size_t>(pool));
  for (int t = 0; t < pool; ++t) team.emplace_back(worker);
  for (auto& th : team) th.join();

  return CalibrationTable::from_rows(std::move(rows));
}

GroverOutcome StatevectorEngine::search(Oracle& oracle, Rng& rng,
                                        std::int64_t iteration_budget) {
  if (oracle.domain_size() > kStatevectorDomainLimit)
    throw std::invalid_argument(
        "statevector engine refuses domains above 2^20; use the cost-model "
        "engine");
  return bbht_search(oracle, rng, iteration_budget);
}

namespace {

// Exhausted-search cost with nothing marked: the measured index never
// verifies, so only the schedule bookkeeping matters. Matches the
// statevector engine's k=0 query distribution without amplitudes.
std::int64_t simulate_exhausted_search(int n, Rng& rng,
                                       std::int64_t iteration_budget) {
  if (n == 0) return 0;
  const double cap = std::max(1.0, std::sqrt(static_cast<double>(n)));
  double cutoff = 1.0;
  std::int64_t iterations = 0;
  std::int64_t queries = 0;
  std::int64_t attempts = 0;
  const std::int64_t attempt_cap = 64 + 2 * iteration_budget;
  while (true) {
    const int hi = static_cast<int>(std::ceil(cutoff));
    const int j = std::uniform_int_distribution<int>(0, hi - 1)(rng);
    queries += j + 1;
    ++attempts;
    iterations += j;
    if (iterations > iteration_budget || attempts >= attempt_cap) break;
    cutoff = std::min(cutoff * 1.2, cap);
  }
  return queries;
}

}  // namespace

GroverOutcome cost_model_search(Oracle& oracle, Rng& rng,
                                const CalibrationTable& table,
                                std::int64_t iteration_budget) {
  GroverOutcome out;
  const int n = oracle.domain_size();
  if (n == 0) return out;
  const int k = oracle.marked_count();
  if (k == 0) {
    const std::int64_t charged =
        simulate_exhausted_search(n, rng, iteration_budget);
    oracle.charge(charged);
    out.queries_used = charged;
    out.attempts = 1;
    return out;
  }
  const QueryEstimate est = table.lookup(n, k);
  std::normal_distribution<double> dist(est.mean, std::max(0.0, est.stdev));
  const double draw = dist(rng);
  const std::int64_t charged =
      std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(draw)));
  oracle.charge(charged);
  const auto& items = oracle.marked_items();
  const int pick =
      items[std::uniform_int_distribution<size_t>(0, items.size() - 1)(rng)];
  out.found = pick;
  out.queries_used = charged;
  out.attempts = 1;
  return out;
}

CostModelEngine::CostModelEngine(CalibrationTable table)
    : table_(std::move(table)) {
  if (table_.empty())
    throw std::runtime_error("cost model requires a non-empty calibration table");
}

GroverOutcome CostModelEngine::search(Oracle& oracle, Rng& rng,
                                      std::int64_t iteration_budget) {
  return cost_model_search(oracle, rng, table_, iteration_budget);
}

FindAllResult find_all_marked(GroverEngine& engine, Oracle& oracle, Rng& rng,
                              double delta, std::int64_t budget) {
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  FindAllResult res;
  if (oracle.domain_size() == 0) return res;
  if (budget <= 0) budget = default_search_budget(oracle.domain_size());

  const std::int64_t start = oracle.query_count();
  int streak = 0;
  while (true) {
    const int need = static_cast<int>(std::ceil(std::log(
        static_cast<double>(std::max<size_t>(res.found.size(), 2)) / delta)));
    GroverOutcome out = engine.search(oracle, rng, budget);
    if (out.found) {
      oracle.unmark(*out.found);
      res.found.push_back(*out.found);
      streak = 0;
    } else if (++streak >= need) {
      break;
    }
  }
  res.total_queries = oracle.query_count() - start;
  return res;
}

}  // namespace conclab
