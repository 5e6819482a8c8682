#include "conclab/quantum_routing.hpp"

#include <stdexcept>

namespace conclab {
namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

QuantumRoutingResult route_full_quantum(const Concentrator& conc,
                                        const Request& req,
                                        GroverEngine& engine, Rng& rng,
                                        double delta, std::int64_t budget) {
  require(conc.kind() == TopologyKind::FullFatSlim,
          "route_full_quantum needs a full fat-and-slim concentrator");
  require(req.size() == conc.inputs(),
          "request length does not match input count");
  require(req.active_count() == conc.outputs(),
          "full routing requires a completed request (k = m)");

  QuantumRoutingResult res;
  std::deque<int> idle =
      route_full_slim(conc, req, res.assignment, res.classical_steps);

  const int fat = conc.inputs() - conc.outputs();
  Oracle oracle = Oracle::from_request_window(req, 1, fat);
  const int fat_actives = oracle.marked_count();
  FindAllResult found = find_all_marked(engine, oracle, rng, delta, budget);
  res.quantum_queries = found.total_queries;

  for (int idx : found.found) {
    const int input = idx + 1;
    const int z = idle.front();
    idle.pop_front();
    ++res.classical_steps.list_ops;
    res.assignment.pairs.emplace_back(input, z);
    ++res.classical_steps.pairings;
    ++res.classical_steps.array_writes;  // unmark in[i]
  }

  res.failed = static_cast<int>(found.found.size()) != fat_actives ||
               !validate_assignment(conc, req, res.assignment).valid;
  return res;
}

QuantumRoutingResult route_bounded_quantum(const Concentrator& conc,
                                           const Request& req,
                                           GroverEngine& engine, Rng& rng,
                                           double delta, std::int64_t budget) {
  require(conc.kind() == TopologyKind::BoundedFatSlim,
          "route_bounded_quantum needs a bounded fat-and-slim concentrator");
  require(req.size() == conc.inputs(),
          "request length does not match input count");

  const int n = conc.inputs();
  const int m = conc.outputs();
  const int q = conc.fat_width();

  QuantumRoutingResult res;
  StepLedger& led = res.classical_steps;
  std::vector<std::uint8_t> output_idle(static_cast<size_t>(m) + 1, 1);
  led.array_writes += m;

  Oracle slim_oracle = Oracle::from_request_window(req, 1, n - q);
  const int slim_actives = slim_oracle.marked_count();
  FindAllResult slim_found =
      find_all_marked(engine, slim_oracle, rng, delta, budget);
  for (int idx : slim_found.found) {
    const int input = idx + 1;
    res.assignment.pairs.emplace_back(input, input);
    ++led.pairings;
    output_idle[static_cast<size_t>(input)] = 0;
    led.array_writes += 2;  // in[i] = 0, out[i] = 0
  }

  Oracle fat_oracle = Oracle::from_request_window(req, n - q + 1, n);
  const int fat_actives = fat_oracle.marked_count();
  FindAllResult fat_found =
      find_all_marked(engine, fat_oracle, rng, delta, budget);
  std::vector<int> fat_locals;
  fat_locals.reserve(fat_found.found.size());
  for (int idx : fat_found.found) {
    fat_locals.push_back(idx + 1);
    ++led.list_ops;
    ++led.array_writes;  // in[i] = 0
  }

  std::vector<int> unrouted;
  pair_bounded_fat(conc, fat_locals, output_idle, res.assignment, led,
                   unrouted);

  res.quantum_queries = slim_found.total_queries + fat_found.total_queries;
  res.failed = static_cast<int>(slim_found.found.size()) != slim_actives ||
               static_cast<int>(fat_found.found.size()) != fat_actives ||
               !unrouted.empty() ||
               !validate_assignment(conc, req, res.assignment).valid;
  return res;
}

QuantumRoutingResult route_regular_quantum(const Concentrator& conc,
                                           const Request& req,
                                           GroverEngine& engine, Rng& rng,
                                           double delta, std::int64_t budget) {
  require(conc.kind() == TopologyKind::RegularFatSlim,
          "route_regular_quantum needs a regular fat-and-slim concentrator");
  require(req.size() == conc.inputs(),
          "request length does not match input count");
  require(req.active_count() == conc.outputs(),
          "regular routing requires a completed request (k = m)");

  const int p = conc.sections();
  const int m = conc.outputs();

  QuantumRoutingResult res;
  Oracle oracle = Oracle::from_request_window(req, 1, conc.inputs());
  const int actives = oracle.marked_count();
  FindAllResult found = find_all_marked(engine, oracle, rng, delta, budget);
  res.quantum_queries = found.total_queries;

  if (static_cast<int>(found.found.size()) != actives) {
    res.failed = true;
    return res;
  }

  StepLedger led;
  std::vector<std::vector<int>> sections(static_cast<size_t>(p));
  for (int idx : found.found) {
    const int flat = idx + 1;
    const int j = (flat - 1) / m + 1;
    const int local = flat - (j - 1) * m;
    sections[static_cast<size_t>(j) - 1].push_back(local);
    ++led.list_ops;
    ++led.array_writes;
  }

  RegularRouteResult routed =
      route_regular_sections(conc, std::move(sections), led);
  res.assignment = std::move(routed.assignment);
  res.classical_steps = routed.ledger;
  res.detail = std::move(routed.detail);
  res.failed = !validate_assignment(conc, req, res.assignment).valid;
  return res;
}

}  // namespace conclab
