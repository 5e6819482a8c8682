#pragma once

#include <cstdint>
#include <optional>

#include "conclab/classical_routing.hpp"
#include "conclab/grover.hpp"

namespace conclab {

struct QuantumRoutingResult {
  Assignment assignment;
  std::int64_t quantum_queries = 0;
  StepLedger classical_steps;
  /// Set when the search phase missed an active input or the assembled
  /// assignment fails post-hoc validation. When false, the assignment is a
  /// valid routing of the whole request.
  bool failed = false;
  /// Regular router only.
  std::optional<RegularRouteDetail> detail;
};

/// Full fat-and-slim routing with the fat actives located by repeated
/// searches over the fat window [1, n-m]; the slim section is routed
/// classically, identically to route_full_classical.
QuantumRoutingResult route_full_quantum(const Concentrator& conc,
                                        const Request& req,
                                        GroverEngine& engine, Rng& rng,
                                        double delta,
                                        std::int64_t budget = 0);

/// Bounded fat-and-slim routing with both the slim window [1, n-q] and the
/// fat window [n-q+1, n] enumerated by search; pairing is the same stride
/// scan the classical router uses.
QuantumRoutingResult route_bounded_quantum(const Concentrator& conc,
                                           const Request& req,
                                           GroverEngine& engine, Rng& rng,
                                           double delta,
                                           std::int64_t budget = 0);

/// Regular fat-and-slim routing: one flat search over all n inputs, each
/// found index decoded to its (section, local) position, then the same
/// case split and pairing as route_regular_classical.
QuantumRoutingResult route_regular_quantum(const Concentrator& conc,
                                           const Request& req,
                                           GroverEngine& engine, Rng& rng,
                                           double delta,
                                           std::int64_t budget = 0);

}  // namespace conclab
