#include "conclab/topology_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace conclab {
namespace {

struct LineReader {
  std::string_view text;
  size_t pos = 0;
  int line_no = 0;

  // Returns false at end of input. Skips blank lines.
  bool next(std::string_view& out) {
    while (pos < text.size()) {
      size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(pos, end - pos);
      pos = end < text.size() ? end + 1 : end;
      ++line_no;
      while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
        line.remove_suffix(1);
      while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
      if (!line.empty()) {
        out = line;
        return true;
      }
    }
    return false;
  }
};

int parse_int(std::string_view token, int line, const std::string& what) {
  int value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw TopologyParseError(line, "expected integer for " + what + ", got '" +
                                       std::string(token) + "'");
  return value;
}

// Expects "key: value"; returns value with surrounding spaces stripped.
std::string_view expect_field(LineReader& reader, const std::string& key) {
  std::string_view line;
  if (!reader.next(line))
    throw TopologyParseError(reader.line_no + 1,
                             "unexpected end of input, missing field '" + key +
                                 "'");
  const std::string prefix = key + ":";
  if (line.substr(0, prefix.size()) != prefix)
    throw TopologyParseError(reader.line_no, "expected field '" + key +
                                                 "', got '" +
                                                 std::string(line) + "'");
  std::string_view value = line.substr(prefix.size());
  while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
  return value;
}

std::vector<int> parse_row(std::string_view value, int line) {
  if (value.size() < 2 || value.front() != '[' || value.back() != ']')
    throw TopologyParseError(line, "adjacency list must be bracketed, got '" +
                                       std::string(value) + "'");
  value = value.substr(1, value.size() - 2);
  std::vector<int> row;
  size_t start = 0;
  while (start < value.size()) {
    size_t comma = value.find(',', start);
    if (comma == std::string_view::npos) comma = value.size();
    std::string_view token = value.substr(start, comma - start);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (token.empty())
      throw TopologyParseError(line, "empty entry in adjacency list");
    row.push_back(parse_int(token, line, "adjacency entry"));
    start = comma + 1;
  }
  return row;
}

}  // namespace

std::string serialize_topology(const Concentrator& conc) {
  if (conc.storage() != AdjacencyStorage::Explicit)
    throw std::logic_error("serialize_topology: adjacency not materialized");
  std::ostringstream out;
  out << "kind: " << to_string(conc.kind()) << '\n';
  out << "n: " << conc.inputs() << '\n';
  out << "m: " << conc.outputs() << '\n';
  if (conc.kind() == TopologyKind::BoundedFatSlim) {
    out << "q: " << conc.fat_width() << '\n';
    out << "c: " << conc.capacity() << '\n';
  } else if (conc.kind() == TopologyKind::RegularFatSlim) {
    out << "p: " << conc.sections() << '\n';
  }
  out << "adjacency:\n";
  for (int i = 1; i <= conc.inputs(); ++i) {
    out << i << ": [";
    const auto row = conc.neighbors(i);
    for (size_t t = 0; t < row.size(); ++t) {
      if (t) out << ", ";
      out << row[t];
    }
    out << "]\n";
  }
  return out.str();
}

Concentrator parse_topology(std::string_view text) {
  LineReader reader{text};

  const std::string_view kind_token = expect_field(reader, "kind");
  TopologyKind kind;
  if (kind_token == "full") {
    kind = TopologyKind::FullFatSlim;
  } else if (kind_token == "bounded") {
    kind = TopologyKind::BoundedFatSlim;
  } else if (kind_token == "regular") {
    kind = TopologyKind::RegularFatSlim;
  } else {
    throw TopologyParseError(reader.line_no,
                             "unknown kind '" + std::string(kind_token) +
                                 "' (expected full, bounded, or regular)");
  }

  const std::string_view n_token = expect_field(reader, "n");
  const int n = parse_int(n_token, reader.line_no, "n");
  const std::string_view m_token = expect_field(reader, "m");
  const int m = parse_int(m_token, reader.line_no, "m");
  int q = 0;
  int p = 0;
  if (kind == TopologyKind::BoundedFatSlim) {
    const std::string_view q_token = expect_field(reader, "q");
    q = parse_int(q_token, reader.line_no, "q");
    const std::string_view c_token = expect_field(reader, "c");
    const int c = parse_int(c_token, reader.line_no, "c");
    if (q < 1 || c != m / q)
      throw TopologyParseError(reader.line_no,
                               "c must equal floor(m/q) = " +
                                   std::to_string(q >= 1 ? m / q : 0));
  } else if (kind == TopologyKind::RegularFatSlim) {
    const std::string_view p_token = expect_field(reader, "p");
    p = parse_int(p_token, reader.line_no, "p");
  }

  const std::string_view adj_header = expect_field(reader, "adjacency");
  if (!adj_header.empty())
    throw TopologyParseError(reader.line_no,
                             "field 'adjacency' takes no inline value");

  std::vector<std::vector<int>> rows;
  rows.reserve(static_cast<size_t>(n > 0 ? n : 0));
  for (int i = 1; i <= n; ++i) {
    std::string_view line;
    if (!reader.next(line))
      throw TopologyParseError(
          reader.line_no + 1,
          "unexpected end of input, missing adjacency row for input " +
              std::to_string(i));
    const size_t colon = line.find(':');
    if (colon == std::string_view::npos)
      throw TopologyParseError(reader.line_no,
                               "expected 'input: [outputs]' line");
    const int input =
        parse_int(line.substr(0, colon), reader.line_no, "input index");
    if (input != i)
      throw TopologyParseError(reader.line_no,
                               "adjacency rows must appear in order; expected "
                               "input " + std::to_string(i) + ", got " +
                                   std::to_string(input));
    std::string_view value = line.substr(colon + 1);
    while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
    rows.push_back(parse_row(value, reader.line_no));
  }

  std::string_view trailing;
  if (reader.next(trailing))
    throw TopologyParseError(reader.line_no, "trailing content after the " +
                                                 std::to_string(n) +
                                                 " adjacency rows");

  try {
    return Concentrator::from_raw_parts(kind, n, m, q, p, std::move(rows),
                                        AdjacencyStorage::Explicit);
  } catch (const std::invalid_argument& err) {
    throw TopologyParseError(reader.line_no, err.what());
  }
}

void save_topology(const std::string& path, const Concentrator& conc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << serialize_topology(conc);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

Concentrator load_topology(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open topology file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_topology(buffer.str());
}

}  // namespace conclab
