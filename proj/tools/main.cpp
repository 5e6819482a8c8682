#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "conclab/classical_routing.hpp"
#include "conclab/experiment.hpp"
#include "conclab/matching_oracle.hpp"
#include "conclab/quantum_routing.hpp"
#include "conclab/topology_io.hpp"

using namespace conclab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;

std::string default_calibration_path() {
  if (const char* env = std::getenv("CONCLAB_CALIBRATION")) return env;
  return "data/grover_calibration.csv";
}

CalibrationTable load_table(const std::string& path) {
  return CalibrationTable::load(path.empty() ? default_calibration_path()
                                             : path);
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) continue;
    out.push_back(std::stoi(token));
  }
  if (out.empty()) throw std::invalid_argument("empty integer list");
  return out;
}

void print_topology_summary(const Concentrator& conc) {
  std::cout << "kind: " << to_string(conc.kind()) << "\n";
  std::cout << "n: " << conc.inputs() << "\n";
  std::cout << "m: " << conc.outputs() << "\n";
  if (conc.kind() == TopologyKind::BoundedFatSlim) {
    std::cout << "q: " << conc.fat_width() << "\n";
    std::cout << "c: " << conc.capacity() << "\n";
  }
  if (conc.kind() == TopologyKind::RegularFatSlim)
    std::cout << "p: " << conc.sections() << "\n";
  std::cout << "crosspoints: " << conc.crosspoint_count() << "\n";
  std::cout << "capacity (declared): " << conc.capacity() << "\n";
  if (conc.kind() == TopologyKind::RegularFatSlim) {
    int lo = conc.outputs() + 1, hi = 0;
    for (int i = 1; i <= conc.inputs(); ++i) {
      lo = std::min(lo, conc.degree(i));
      hi = std::max(hi, conc.degree(i));
    }
    std::cout << "degrees: outputs " << conc.inputs() - conc.outputs() + 1
              << ", inputs " << lo << "-" << hi << "\n";
  }
}

struct BuildOptions {
  std::string kind;
  std::vector<int> params;
  std::string out_path;
};

int cmd_build(const BuildOptions& opt) {
  Concentrator conc = [&] {
    if (opt.kind == "full") {
      if (opt.params.size() != 2)
        throw std::invalid_argument("build full needs: n m");
      return build_full_fat_slim(opt.params[0], opt.params[1]);
    }
    if (opt.kind == "bounded") {
      if (opt.params.size() != 3)
        throw std::invalid_argument("build bounded needs: n m q");
      return build_bounded_fat_slim(opt.params[0], opt.params[1],
                                    opt.params[2]);
    }
    if (opt.kind == "regular") {
      if (opt.params.size() != 2)
        throw std::invalid_argument("build regular needs: p m");
      return build_regular_fat_slim(opt.params[0], opt.params[1]);
    }
    throw std::invalid_argument("unknown kind '" + opt.kind +
                                "' (full | bounded | regular)");
  }();
  print_topology_summary(conc);
  if (!opt.out_path.empty()) {
    save_topology(opt.out_path, conc);
    std::cout << "written: " << opt.out_path << "\n";
  }
  return kExitPass;
}

struct RouteOptions {
  std::string topology_path;
  std::string request_text;
  std::string router = "classical";
  std::string engine = "statevector";
  std::string calibration_path;
  std::uint64_t seed = 1;
  double delta = 0.01;
  std::int64_t budget = 0;
};

void print_ledger(const StepLedger& ledger) {
  std::cout << "steps: reads=" << ledger.array_reads
            << " writes=" << ledger.array_writes
            << " pairings=" << ledger.pairings
            << " list_ops=" << ledger.list_ops << " total=" << ledger.total()
            << "\n";
}

void print_assignment(const Assignment& asg) {
  Assignment sorted = asg;
  std::sort(sorted.pairs.begin(), sorted.pairs.end());
  for (const auto& [input, output] : sorted.pairs)
    std::cout << input << " -> " << output << "\n";
  std::cout << "pairs: " << sorted.pairs.size() << "\n";
}

int cmd_route(const RouteOptions& opt) {
  const Concentrator conc = load_topology(opt.topology_path);
  Request req = parse_request(opt.request_text, conc.inputs());

  if (conc.kind() != TopologyKind::BoundedFatSlim &&
      req.active_count() < conc.outputs()) {
    req = complete_request(conc, req);
    std::cout << "request completed to k=" << req.active_count() << "\n";
  }
  if (conc.kind() == TopologyKind::BoundedFatSlim &&
      req.active_count() > conc.capacity()) {
    std::cout << "note: k=" << req.active_count()
              << " exceeds the certified capacity c=" << conc.capacity()
              << "; routing best-effort\n";
  }

  bool ok = true;
  if (opt.router == "classical") {
    Assignment asg;
    StepLedger ledger;
    std::vector<int> unrouted;
    switch (conc.kind()) {
      case TopologyKind::FullFatSlim: {
        RouteResult r = route_full_classical(conc, req);
        asg = std::move(r.assignment);
        ledger = r.ledger;
        unrouted = std::move(r.unrouted);
        break;
      }
      case TopologyKind::BoundedFatSlim: {
        RouteResult r = route_bounded_classical(conc, req);
        asg = std::move(r.assignment);
        ledger = r.ledger;
        unrouted = std::move(r.unrouted);
        break;
      }
      case TopologyKind::RegularFatSlim: {
        RegularRouteResult r = route_regular_classical(conc, req);
        asg = std::move(r.assignment);
        ledger = r.ledger;
        break;
      }
    }
    print_assignment(asg);
    print_ledger(ledger);
    for (int input : unrouted)
      std::cout << "unrouted active input: " << input << "\n";
    const ValidityReport report = validate_assignment(conc, req, asg);
    std::cout << "valid: " << (report.valid ? "yes" : "no") << "\n";
    ok = report.valid && unrouted.empty();
  } else if (opt.router == "quantum") {
    StatevectorEngine statevector;
    std::optional<CostModelEngine> cost_model;
    GroverEngine* engine = &statevector;
    if (opt.engine == "cost-model") {
      cost_model.emplace(load_table(opt.calibration_path));
      engine = &*cost_model;
    } else if (opt.engine != "statevector") {
      throw std::invalid_argument("unknown engine '" + opt.engine +
                                  "' (statevector | cost-model)");
    }
    Rng rng(opt.seed);
    QuantumRoutingResult r;
    switch (conc.kind()) {
      case TopologyKind::FullFatSlim:
        r = route_full_quantum(conc, req, *engine, rng, opt.delta, opt.budget);
        break;
      case TopologyKind::BoundedFatSlim:
        r = route_bounded_quantum(conc, req, *engine, rng, opt.delta,
                                  opt.budget);
        break;
      case TopologyKind::RegularFatSlim:
        r = route_regular_quantum(conc, req, *engine, rng, opt.delta,
                                  opt.budget);
        break;
    }
    print_assignment(r.assignment);
    print_ledger(r.classical_steps);
    std::cout << "quantum_queries: " << r.quantum_queries << "\n";
    std::cout << "engine: " << engine->name() << "\n";
    std::cout << "seed: " << opt.seed << "\n";
    const ValidityReport report = validate_assignment(conc, req, r.assignment);
    std::cout << "failed: " << (r.failed ? "yes" : "no") << "\n";
    std::cout << "valid: " << (report.valid ? "yes" : "no") << "\n";
    ok = !r.failed && report.valid;
  } else {
    throw std::invalid_argument("unknown router '" + opt.router +
                                "' (classical | quantum)");
  }
  return ok ? kExitPass : kExitVerifyFailure;
}

struct VerifyOptions {
  std::string topology_path;
  std::string suite;
  std::string calibration_path;
  long long budget = 1'000'000;
  std::uint64_t seed = 1;
  int trials = 1000;
};

int verify_capacity(const Concentrator& conc, const VerifyOptions& opt) {
  const int claim = conc.capacity();
  CapacityCertificate cert;
  try {
    cert = certify_capacity(conc, claim, CertifyMode::Exhaustive, opt.budget,
                            opt.seed, true);
  } catch (const BudgetExceeded& err) {
    std::cout << "[capacity] " << err.what() << "\n";
    std::cout << "[capacity] downgrading to sampled mode (" << opt.budget
              << " subsets)\n";
    cert = certify_capacity(conc, claim, CertifyMode::Sampled, opt.budget,
                            opt.seed, false);
  }
  if (!cert.certified) {
    std::cout << "[capacity] FAIL: subset {";
    for (size_t i = 0; i < cert.failing_subset->size(); ++i)
      std::cout << (i ? ", " : "") << (*cert.failing_subset)[i];
    std::cout << "} cannot be fully matched at size " << claim << "\n";
    return kExitVerifyFailure;
  }
  std::cout << "[capacity] certified c=" << claim << " ("
            << (cert.mode == CertifyMode::Exhaustive ? "exhaustive" : "sampled")
            << ", " << cert.subsets_checked << " subsets)\n";
  if (cert.extension_witness) {
    std::cout << "[capacity] witness that c=" << claim + 1 << " fails: {";
    for (size_t i = 0; i < cert.extension_witness->size(); ++i)
      std::cout << (i ? ", " : "") << (*cert.extension_witness)[i];
    std::cout << "}\n";
  }
  return kExitPass;
}

int verify_crosspoints(const Concentrator& conc) {
  const CrosspointReport report = check_crosspoint_bounds(conc);
  std::cout << "[crosspoints] " << report.summary << "\n";
  return report.pass ? kExitPass : kExitVerifyFailure;
}

int verify_router_equivalence(const Concentrator& conc,
                              const VerifyOptions& opt) {
  const RouterFn router = [](const Concentrator& c, const Request& r) {
    switch (c.kind()) {
      case TopologyKind::FullFatSlim:
        return route_full_classical(c, r).assignment;
      case TopologyKind::BoundedFatSlim:
        return route_bounded_classical(c, r).assignment;
      case TopologyKind::RegularFatSlim:
        return route_regular_classical(c, r).assignment;
    }
    return Assignment{};
  };

  long long checked = 0;
  long long failures = 0;
  auto run_one = [&](const Request& base) {
    const Request req = conc.kind() == TopologyKind::BoundedFatSlim
                            ? base
                            : complete_request(conc, base);
    const EquivalenceReport report = router_equivalence(conc, req, router);
    ++checked;
    if (!report.pass) {
      ++failures;
      if (failures <= 5) {
        std::cout << "[router-equivalence] FAIL: request {";
        const auto actives = req.active_list();
        for (size_t i = 0; i < actives.size(); ++i)
          std::cout << (i ? ", " : "") << actives[i];
        std::cout << "} router=" << report.router_size
                  << " oracle=" << report.oracle_size << "\n";
      }
    }
  };

  const int n = conc.inputs();
  const int base_size = conc.kind() == TopologyKind::BoundedFatSlim
                            ? conc.capacity()
                            : conc.outputs();
  const long long combos = binomial_capped(n, base_size, opt.budget);
  if (combos <= std::min<long long>(opt.budget, 100'000)) {
    std::vector<int> idx(static_cast<size_t>(base_size));
    for (int i = 0; i < base_size; ++i) idx[static_cast<size_t>(i)] = i;
    while (true) {
      Request req(n);
      for (int i : idx) req.set_active(i + 1, true);
      run_one(req);
      int pos = base_size - 1;
      while (pos >= 0 && idx[static_cast<size_t>(pos)] == n - base_size + pos)
        --pos;
      if (pos < 0) break;
      ++idx[static_cast<size_t>(pos)];
      for (int t = pos + 1; t < base_size; ++t)
        idx[static_cast<size_t>(t)] = idx[static_cast<size_t>(t) - 1] + 1;
    }
    std::cout << "[router-equivalence] exhaustive sweep: " << checked
              << " requests";
  } else {
    Rng rng(opt.seed);
    for (int t = 0; t < opt.trials; ++t) {
      Request req(n);
      while (req.active_count() < base_size)
        req.set_active(std::uniform_int_distribution<int>(1, n)(rng), true);
      run_one(req);
    }
    std::cout << "[router-equivalence] randomized sweep: " << checked
              << " requests";
  }
  std::cout << ", failures: " << failures << "\n";
  return failures == 0 ? kExitPass : kExitVerifyFailure;
}

int verify_grover_calibration(const VerifyOptions& opt) {
  const CalibrationTable table = load_table(opt.calibration_path);
  std::cout << "[grover-calibration] table rows: " << table.rows().size()
            << "\n";
  int failures = 0;
  const std::vector<std::pair<int, int>> points{
      {16, 1}, {64, 4}, {256, 16}, {1024, 64}};
  for (const auto& [n, k] : points) {
    Rng rng(opt.seed ^ static_cast<std::uint64_t>(n * 131 + k));
    double sum = 0.0;
    const int trials = std::max(100, opt.trials / 4);
    for (int t = 0; t < trials; ++t) {
      Oracle oracle(n);
      for (int i = 0; i < k; ++i) oracle.mark(i);
      std::int64_t queries = 0;
      while (true) {
        const GroverOutcome out =
            bbht_search(oracle, rng, default_search_budget(n));
        queries += out.queries_used;
        if (out.found) break;
      }
      sum += static_cast<double>(queries);
    }
    const double statevector_mean = sum / trials;
    const QueryEstimate est = table.lookup(n, k);
    const double rel =
        std::abs(est.mean - statevector_mean) / statevector_mean;
    std::cout << "[grover-calibration] N=" << n << " k=" << k
              << ": table mean " << est.mean << " vs statevector "
              << statevector_mean << " (" << static_cast<int>(rel * 100.0)
              << "%)\n";
    if (rel > 0.15) ++failures;
  }
  return failures == 0 ? kExitPass : kExitVerifyFailure;
}

int cmd_verify(const VerifyOptions& opt) {
  int status = kExitPass;
  if (opt.suite == "grover-calibration") {
    status = verify_grover_calibration(opt);
  } else {
    const Concentrator conc = load_topology(opt.topology_path);
    if (opt.suite == "capacity") {
      status = verify_capacity(conc, opt);
    } else if (opt.suite == "crosspoints") {
      status = verify_crosspoints(conc);
    } else if (opt.suite == "router-equivalence") {
      status = verify_router_equivalence(conc, opt);
    } else {
      throw std::invalid_argument(
          "unknown suite '" + opt.suite +
          "' (capacity | crosspoints | router-equivalence | "
          "grover-calibration)");
    }
  }
  std::cout << (status == kExitPass ? "PASS " : "FAIL ") << opt.suite << "\n";
  return status;
}

struct SweepOptions {
  std::string kind = "full";
  std::string n_list;
  std::string m_rule = "sqrt";
  std::string q_rule;
  std::string gen = "random";
  int request_actives = -1;
  std::string router = "both";
  std::string engine = "statevector";
  std::string calibration_path;
  std::string out_path = "sweep.csv";
  int trials = 1;
  double delta = 0.01;
  std::uint64_t seed = 1;
  std::int64_t budget = 0;
};

int resolve_m(const std::string& rule, int n, size_t idx) {
  if (rule == "sqrt") {
    const int root = static_cast<int>(std::lround(std::sqrt(double(n))));
    if (root * root != n)
      throw std::invalid_argument("m=sqrt needs square n, got " +
                                  std::to_string(n));
    return root;
  }
  if (rule == "half") return n / 2;
  const std::vector<int> values = parse_int_list(rule);
  if (values.size() == 1) return values[0];
  if (idx < values.size()) return values[idx];
  throw std::invalid_argument("m list shorter than n list");
}

int cmd_sweep(const SweepOptions& opt) {
  ExperimentSpec spec;
  const std::vector<int> ns = parse_int_list(opt.n_list);
  for (size_t i = 0; i < ns.size(); ++i) {
    SweepInstance inst;
    inst.n = ns[i];
    inst.m = resolve_m(opt.m_rule, ns[i], i);
    if (opt.kind == "full") {
      inst.kind = TopologyKind::FullFatSlim;
    } else if (opt.kind == "bounded") {
      inst.kind = TopologyKind::BoundedFatSlim;
      if (opt.q_rule.empty())
        throw std::invalid_argument("bounded sweeps need --q");
      inst.q = resolve_m(opt.q_rule, ns[i], i);
    } else if (opt.kind == "regular") {
      inst.kind = TopologyKind::RegularFatSlim;
      if (inst.m == 0 || ns[i] % inst.m != 0)
        throw std::invalid_argument("regular sweeps need m dividing n");
      inst.p = ns[i] / inst.m;
    } else {
      throw std::invalid_argument("unknown kind '" + opt.kind + "'");
    }
    spec.instances.push_back(inst);
  }

  if (opt.gen == "random") {
    spec.gen = RequestGen::Random;
  } else if (opt.gen == "random-fat") {
    spec.gen = RequestGen::RandomFat;
  } else if (opt.gen == "exhaustive") {
    spec.gen = RequestGen::Exhaustive;
  } else {
    throw std::invalid_argument("unknown generator '" + opt.gen +
                                "' (random | random-fat | exhaustive)");
  }
  spec.request_actives = opt.request_actives;

  if (opt.router == "classical") {
    spec.router = RouterChoice::Classical;
  } else if (opt.router == "quantum") {
    spec.router = RouterChoice::Quantum;
  } else if (opt.router == "both") {
    spec.router = RouterChoice::Both;
  } else {
    throw std::invalid_argument("unknown router '" + opt.router + "'");
  }

  spec.engine = opt.engine == "cost-model" ? EngineChoice::CostModel
                                           : EngineChoice::Statevector;
  if (opt.engine != "cost-model" && opt.engine != "statevector")
    throw std::invalid_argument("unknown engine '" + opt.engine + "'");
  spec.trials = opt.trials;
  spec.delta = opt.delta;
  spec.seed = opt.seed;
  spec.budget = opt.budget;

  std::optional<CalibrationTable> table;
  if (spec.engine == EngineChoice::CostModel &&
      spec.router != RouterChoice::Classical)
    table = load_table(opt.calibration_path);

  const std::vector<ResultRow> rows =
      run_sweep(spec, table ? &*table : nullptr);
  write_csv(opt.out_path, rows);
  std::cout << "rows: " << rows.size() << "\n";
  std::cout << "written: " << opt.out_path << "\n";

  const SweepSummary summary = summarize(rows);
  if (summary.classical_fit)
    std::cout << "classical steps vs n: slope " << summary.classical_fit->slope
              << " (r2 " << summary.classical_fit->r_squared << ")\n";
  if (summary.quantum_fit)
    std::cout << "quantum queries vs sqrt(n*k)*ln(k): slope "
              << summary.quantum_fit->slope << " (r2 "
              << summary.quantum_fit->r_squared << ")\n";
  if (summary.quantum_fit_worst_case)
    std::cout << "quantum queries vs sqrt(n*m)*ln(m): slope "
              << summary.quantum_fit_worst_case->slope << " (r2 "
              << summary.quantum_fit_worst_case->r_squared << ")\n";
  if (summary.crossover_n)
    std::cout << "query-count crossover near n = "
              << static_cast<long long>(*summary.crossover_n) << "\n";
  else if (spec.router == RouterChoice::Both)
    std::cout << "no query-count crossover inside this grid\n";
  return kExitPass;
}

struct CalibrateOptions {
  std::string out_path;
  int max_domain = 4096;
  int trials = 400;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

int cmd_calibrate(const CalibrateOptions& opt) {
  CalibrationGrid grid;
  grid.max_domain = opt.max_domain;
  grid.trials = opt.trials;
  grid.seed = opt.seed;
  const CalibrationTable table = run_calibration(grid, worker_count());
  const std::string path =
      opt.out_path.empty() ? default_calibration_path() : opt.out_path;
  table.save(path);
  std::cout << "rows: " << table.rows().size() << "\n";
  std::cout << "written: " << path << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "conclab: build fat-and-slim sparse-crossbar concentrators, route "
      "concentration requests classically or with simulated quantum search, "
      "verify capacity and crosspoint claims, and sweep query-count grids"};
  app.require_subcommand(1);

  BuildOptions build_opt;
  CLI::App* build = app.add_subcommand("build", "construct a topology");
  build->add_option("kind", build_opt.kind, "full | bounded | regular")
      ->required();
  build->add_option("params", build_opt.params,
                    "full: n m; bounded: n m q; regular: p m")
      ->required();
  build->add_option("--out", build_opt.out_path, "topology file to write");

  RouteOptions route_opt;
  CLI::App* route = app.add_subcommand("route", "route one request");
  route->add_option("--topology", route_opt.topology_path)->required();
  route->add_option("--request", route_opt.request_text,
                    "bit string of length n, or comma-separated input indices")
      ->required();
  route->add_option("--router", route_opt.router, "classical | quantum");
  route->add_option("--engine", route_opt.engine,
                    "statevector | cost-model (quantum router)");
  route->add_option("--seed", route_opt.seed);
  route->add_option("--delta", route_opt.delta,
                    "target failure probability of the quantum router");
  route->add_option("--budget", route_opt.budget,
                    "per-search iteration budget override");
  route->add_option("--calibration", route_opt.calibration_path,
                    "calibration table path (cost-model engine)");

  VerifyOptions verify_opt;
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--topology", verify_opt.topology_path,
                     "topology file (not needed for grover-calibration)");
  verify
      ->add_option("--suite", verify_opt.suite,
                   "capacity | crosspoints | router-equivalence | "
                   "grover-calibration")
      ->required();
  verify->add_option("--budget", verify_opt.budget,
                     "subset-check budget for exhaustive verification");
  verify->add_option("--seed", verify_opt.seed);
  verify->add_option("--trials", verify_opt.trials,
                     "randomized-sweep request count");
  verify->add_option("--calibration", verify_opt.calibration_path);

  SweepOptions sweep_opt;
  CLI::App* sweep = app.add_subcommand("sweep", "run a (n, m, k) grid");
  sweep->add_option("--kind", sweep_opt.kind, "full | bounded | regular");
  sweep->add_option("--n", sweep_opt.n_list, "comma-separated input counts")
      ->required();
  sweep->add_option("--m", sweep_opt.m_rule,
                    "sqrt | half | value | comma-separated list");
  sweep->add_option("--q", sweep_opt.q_rule, "bounded fat width (like --m)");
  sweep->add_option("--gen", sweep_opt.gen,
                    "random | random-fat | exhaustive");
  sweep->add_option("--k", sweep_opt.request_actives,
                    "actives per request before completion");
  sweep->add_option("--router", sweep_opt.router,
                    "classical | quantum | both");
  sweep->add_option("--engine", sweep_opt.engine, "statevector | cost-model");
  sweep->add_option("--trials", sweep_opt.trials);
  sweep->add_option("--delta", sweep_opt.delta);
  sweep->add_option("--seed", sweep_opt.seed);
  sweep->add_option("--budget", sweep_opt.budget);
  sweep->add_option("--out", sweep_opt.out_path, "result CSV path");
  sweep->add_option("--calibration", sweep_opt.calibration_path);

  CalibrateOptions calibrate_opt;
  CLI::App* calibrate =
      app.add_subcommand("calibrate", "regenerate the query-cost table");
  calibrate->add_option("--out", calibrate_opt.out_path);
  calibrate->add_option("--max-n", calibrate_opt.max_domain,
                        "largest calibrated domain (power of two)");
  calibrate->add_option("--trials", calibrate_opt.trials);
  calibrate->add_option("--seed", calibrate_opt.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (build->parsed()) return cmd_build(build_opt);
    if (route->parsed()) return cmd_route(route_opt);
    if (verify->parsed()) return cmd_verify(verify_opt);
    if (sweep->parsed()) return cmd_sweep(sweep_opt);
    if (calibrate->parsed()) return cmd_calibrate(calibrate_opt);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
