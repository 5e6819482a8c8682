#include <fstream>
#include <random>
#include <sstream>

#include "conclab/topology_io.hpp"
#include "doctest.h"

using namespace conclab;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file: " << path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const std::string kGoldenDir =
    std::string(CONCLAB_SOURCE_DIR) + "/tests/golden/";

}  // namespace

TEST_CASE("serialize/parse round-trips every construction") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 40)(rng);
    const int m = std::uniform_int_distribution<int>(1, n)(rng);
    const Concentrator full = build_full_fat_slim(n, m);
    CHECK(parse_topology(serialize_topology(full)) == full);
  }
  const Concentrator bounded = build_bounded_fat_slim(9, 7, 2);
  CHECK(parse_topology(serialize_topology(bounded)) == bounded);
  const Concentrator regular = build_regular_fat_slim(3, 6);
  const Concentrator reparsed = parse_topology(serialize_topology(regular));
  CHECK(reparsed == regular);
  CHECK(reparsed.sections() == 3);
  CHECK(reparsed.u_range(2).first == 3);
}

TEST_CASE("golden topology files stay byte-identical") {
  CHECK(serialize_topology(build_full_fat_slim(11, 5)) ==
        read_file(kGoldenDir + "full_11_5.topo"));
  CHECK(serialize_topology(build_bounded_fat_slim(9, 7, 2)) ==
        read_file(kGoldenDir + "bounded_9_7_2.topo"));
  CHECK(serialize_topology(build_regular_fat_slim(3, 6)) ==
        read_file(kGoldenDir + "regular_18_6.topo"));

  CHECK(parse_topology(read_file(kGoldenDir + "full_11_5.topo")) ==
        build_full_fat_slim(11, 5));
}

TEST_CASE("truncated input names the missing field") {
  CHECK_THROWS_WITH_AS(parse_topology("kind: full\nn: 11\n"),
                       "line 3: unexpected end of input, missing field 'm'",
                       TopologyParseError);

  try {
    parse_topology("kind: full\nn: 4\nm: 2\nadjacency:\n1: [1, 2]\n");
    FAIL("expected a parse error");
  } catch (const TopologyParseError& err) {
    CHECK(err.line() == 6);
    CHECK(std::string(err.what()).find("missing adjacency row for input 2") !=
          std::string::npos);
  }
}

TEST_CASE("malformed documents carry line positions") {
  CHECK_THROWS_AS(parse_topology("kind: hexagonal\n"), TopologyParseError);

  try {
    parse_topology("kind: full\nn: 2\nm: two\n");
    FAIL("expected a parse error");
  } catch (const TopologyParseError& err) {
    CHECK(err.line() == 3);
  }

  try {
    parse_topology("kind: full\nn: 2\nm: 1\nadjacency:\n1: [1\n2: [1]\n");
    FAIL("expected a parse error");
  } catch (const TopologyParseError& err) {
    CHECK(err.line() == 5);
  }

  // adjacency entries out of range are structural errors
  CHECK_THROWS_AS(
      parse_topology("kind: full\nn: 2\nm: 1\nadjacency:\n1: [1]\n2: [3]\n"),
      TopologyParseError);
  // bounded c field must match floor(m/q)
  CHECK_THROWS_AS(
      parse_topology("kind: bounded\nn: 9\nm: 7\nq: 2\nc: 2\nadjacency:\n"),
      TopologyParseError);
}

TEST_CASE("parse accepts structurally sound but non-construction adjacency") {
  // Verification tooling must be able to load arbitrary stored topologies;
  // content checks belong to the oracle, not the parser.
  const Concentrator conc = parse_topology(
      "kind: full\nn: 3\nm: 2\nadjacency:\n1: [2]\n2: [1]\n3: [1, 2]\n");
  CHECK(conc.neighbor_list(1) == std::vector<int>{2});
  CHECK(conc.crosspoint_count() == 4);
}
