#include "conclab/request.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace conclab {

Request Request::from_indices(int n, std::span<const int> actives) {
  Request req(n);
  for (int input : actives) req.set_active(input, true);
  return req;
}

std::vector<int> Request::active_list() const {
  std::vector<int> out;
  out.reserve(static_cast<size_t>(k_));
  for (int i = 0; i < size(); ++i)
    if (bits_[static_cast<size_t>(i)]) out.push_back(i + 1);
  return out;
}

Request parse_request(std::string_view text, int n) {
  const bool index_list = text.find(',') != std::string_view::npos;

  if (index_list) {
    Request req(n);
    std::string normalized(text);
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    size_t start = 0;
    while (start < normalized.size()) {
      while (start < normalized.size() && std::isspace(static_cast<unsigned char>(
                                              normalized[start])))
        ++start;
      if (start >= normalized.size()) break;
      size_t end = start;
      while (end < normalized.size() &&
             !std::isspace(static_cast<unsigned char>(normalized[end])))
        ++end;
      const char* first = normalized.data() + start;
      const char* last = normalized.data() + end;
      int value = 0;
      auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec != std::errc{} || ptr != last)
        throw RequestParseError("bad request token '" +
                                std::string(first, last) + "'");
      if (value < 1 || value > n)
        throw RequestParseError("input index " + std::to_string(value) +
                                " outside 1.." + std::to_string(n));
      req.set_active(value, true);
      start = end;
    }
    return req;
  }

  // Bit string; spaces and underscores are cosmetic separators.
  std::string compact;
  compact.reserve(text.size());
  for (char ch : text) {
    if (ch == ' ' || ch == '_' || ch == '\t') continue;
    if (ch != '0' && ch != '1')
      throw RequestParseError(
          "request must be a length-n bit string or a comma-separated index "
          "list; unexpected character '" + std::string(1, ch) + "'");
    compact.push_back(ch);
  }
  if (compact.empty()) return Request(n);
  if (static_cast<int>(compact.size()) != n)
    throw RequestParseError("bit string has length " +
                            std::to_string(compact.size()) +
                            ", expected n = " + std::to_string(n));
  Request req(n);
  for (int i = 0; i < n; ++i)
    if (compact[static_cast<size_t>(i)] == '1') req.set_active(i + 1, true);
  return req;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::UnpairedActiveInput: return "unpaired-active-input";
    case ViolationKind::DuplicateInput: return "duplicate-input";
    case ViolationKind::DuplicateOutput: return "duplicate-output";
    case ViolationKind::MissingCrosspoint: return "missing-crosspoint";
    case ViolationKind::InactiveInputPaired: return "inactive-input-paired";
  }
  return "unknown";
}

Request complete_request(const Concentrator& conc, const Request& req) {
  if (req.size() != conc.inputs())
    throw std::invalid_argument("request length does not match input count");
  if (conc.kind() == TopologyKind::BoundedFatSlim) return req;

  const int m = conc.outputs();
  if (req.active_count() > m)
    throw std::invalid_argument("request has " +
                                std::to_string(req.active_count()) +
                                " active inputs, more than m = " +
                                std::to_string(m));
  Request out = req;
  for (int i = 1; i <= m && out.active_count() < m; ++i)
    if (!out.is_active(i)) out.set_active(i, true);
  return out;
}

ValidityReport validate_assignment(const Concentrator& conc,
                                   const Request& req, const Assignment& asg) {
  ValidityReport report;
  auto fail = [&report](ViolationKind kind, int input, int output,
                        std::string detail) {
    report.valid = false;
    report.violations.push_back({kind, input, output, std::move(detail)});
  };

  std::vector<std::uint8_t> input_used(static_cast<size_t>(conc.inputs()) + 1, 0);
  std::vector<std::uint8_t> output_used(static_cast<size_t>(conc.outputs()) + 1, 0);
  for (const auto& [input, output] : asg.pairs) {
    if (input < 1 || input > conc.inputs()) {
      fail(ViolationKind::MissingCrosspoint, input, output,
           "input index out of range");
      continue;
    }
    if (output < 1 || output > conc.outputs()) {
      fail(ViolationKind::MissingCrosspoint, input, output,
           "output index out of range");
      continue;
    }
    if (input_used[static_cast<size_t>(input)]) {
      fail(ViolationKind::DuplicateInput, input, output,
           "input paired more than once");
    }
    input_used[static_cast<size_t>(input)] = 1;
    if (output_used[static_cast<size_t>(output)]) {
      fail(ViolationKind::DuplicateOutput, input, output,
           "output paired more than once");
    }
    output_used[static_cast<size_t>(output)] = 1;
    if (!req.is_active(input))
      fail(ViolationKind::InactiveInputPaired, input, output,
           "paired input is not active in the request");
    if (!conc.has_crosspoint(input, output))
      fail(ViolationKind::MissingCrosspoint, input, output,
           "no crosspoint between the paired input and output");
  }
  for (int input = 1; input <= conc.inputs(); ++input) {
    if (req.is_active(input) && !input_used[static_cast<size_t>(input)])
      fail(ViolationKind::UnpairedActiveInput, input, 0,
           "active input left unpaired");
  }
  return report;
}

}  // namespace conclab
