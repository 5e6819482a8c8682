#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "conclab/topology.hpp"

namespace conclab {

/// Parse failure with the 1-based line it was detected on.
class TopologyParseError : public std::runtime_error {
 public:
  TopologyParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Text form of a concentrator. Key-value header followed by one
/// "input: [outputs]" line per input:
///
///   kind: bounded
///   n: 9
///   m: 7
///   q: 2
///   c: 3
///   adjacency:
///   1: [1]
///   ...
///
/// Full topologies carry no extra params; regular ones carry "p". Requires
/// explicit adjacency storage.
std::string serialize_topology(const Concentrator& conc);

/// Inverse of serialize_topology. Structural validation only: parameter
/// relations and adjacency shape are checked, adjacency content is taken
/// as-is so verification tooling can inspect arbitrary stored topologies.
Concentrator parse_topology(std::string_view text);

void save_topology(const std::string& path, const Concentrator& conc);
Concentrator load_topology(const std::string& path);

}  // namespace conclab
