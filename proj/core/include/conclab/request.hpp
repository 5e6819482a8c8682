#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "conclab/topology.hpp"

namespace conclab {

/// A concentration request: which of the n inputs want an output.
/// The active count is maintained alongside the bit array.
class Request {
 public:
  explicit Request(int n) : bits_(static_cast<size_t>(n), 0) {
    if (n < 0) throw std::invalid_argument("request length must be >= 0");
  }

  static Request from_indices(int n, std::span<const int> actives);
  static Request from_indices(int n, std::initializer_list<int> actives) {
    return from_indices(n, std::span<const int>(actives.begin(), actives.size()));
  }

  int size() const { return static_cast<int>(bits_.size()); }
  int active_count() const { return k_; }
  bool is_active(int input) const {
    check(input);
    return bits_[static_cast<size_t>(input) - 1] != 0;
  }
  void set_active(int input, bool active) {
    check(input);
    auto& bit = bits_[static_cast<size_t>(input) - 1];
    k_ += (active ? 1 : 0) - (bit ? 1 : 0);
    bit = active ? 1 : 0;
  }
  std::vector<int> active_list() const;
  const std::vector<std::uint8_t>& raw_bits() const { return bits_; }

  bool operator==(const Request& other) const = default;

 private:
  void check(int input) const {
    if (input < 1 || input > size())
      throw std::out_of_range("input index " + std::to_string(input) +
                              " outside 1.." + std::to_string(size()));
  }

  std::vector<std::uint8_t> bits_;
  int k_ = 0;
};

class RequestParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Accepts either a bit string of length n ("0101...", spaces and
/// underscores ignored) or a comma/space separated 1-based index list
/// ("1,3,5"). An empty string is the empty request.
Request parse_request(std::string_view text, int n);

/// One claimed routing: (input, output) pairs.
struct Assignment {
  std::vector<std::pair<int, int>> pairs;
};

enum class ViolationKind {
  UnpairedActiveInput,
  DuplicateInput,
  DuplicateOutput,
  MissingCrosspoint,
  InactiveInputPaired,
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  int input = 0;
  int output = 0;
  std::string detail;
};

struct ValidityReport {
  bool valid = true;
  std::vector<Violation> violations;
};

/// Pads a request up to m active inputs with the lowest-indexed idle inputs
/// among inputs 1..m (full and regular kinds). Bounded requests are returned
/// unchanged: the bounded router takes any k <= c directly.
Request complete_request(const Concentrator& conc, const Request& req);

/// Checks that every active input is paired exactly once, inputs and outputs
/// are distinct, no inactive input appears, and every pair is a crosspoint.
ValidityReport validate_assignment(const Concentrator& conc, const Request& req,
                                   const Assignment& asg);

}  // namespace conclab
