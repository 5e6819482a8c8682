#pragma once

#include <span>
#include <string>
#include <vector>

namespace conclab {

enum class TopologyKind { FullFatSlim, BoundedFatSlim, RegularFatSlim };

std::string to_string(TopologyKind kind);

/// How neighbor sets are held: materialized per-input rows, or computed on
/// demand from the construction parameters. Formulaic storage is meant for
/// large sweep instances where n*m rows would not fit in memory; every
/// verification path works on Explicit instances.
enum class AdjacencyStorage { Explicit, Formulaic };

/// Inclusive 1-based range of output indices.
struct OutputRange {
  int first = 0;
  int last = 0;
  int size() const { return last - first + 1; }
  bool contains(int o) const { return o >= first && o <= last; }
};

/// A sparse-crossbar concentrator: n inputs, m outputs (both 1-based), one
/// edge per crosspoint. Immutable after construction and safe to share
/// across threads.
///
/// Three constructions are supported:
///  - full fat-and-slim: inputs 1..n-m see every output, input n-m+i sees
///    only output i;
///  - bounded fat-and-slim: slim inputs 1..n-q see output i, fat input y_i
///    (global n-q+i) sees outputs i, i+q, i+2q, ... (floor(m/q) of them);
///  - regular fat-and-slim: n = p*m inputs in p sections; section j's
///    inputs see every output outside the block U_j, and the diagonal
///    inputs W_j additionally see their own output in U_j.
class Concentrator {
 public:
  TopologyKind kind() const { return kind_; }
  int inputs() const { return n_; }
  int outputs() const { return m_; }
  AdjacencyStorage storage() const { return storage_; }

  /// Fat-section width q. Bounded concentrators only.
  int fat_width() const;
  /// Declared capacity: m for full/regular, floor(m/q) for bounded.
  int capacity() const;
  /// Section count p. Regular concentrators only.
  int sections() const;
  /// Outputs per section block, m/p. Regular concentrators only.
  int section_width() const;

  /// Stored neighbor row (ascending). Explicit storage only.
  std::span<const int> neighbors(int input) const;
  /// Neighbor set as a fresh vector; works for both storage modes.
  std::vector<int> neighbor_list(int input) const;
  int degree(int input) const;
  bool has_crosspoint(int input, int output) const;
  long long crosspoint_count() const;

  // Regular-section structure (1-based section index j).
  // U_j is the j-th block of m/p outputs; the W_j inputs are x_{j,t} for
  // t inside that same range, reachable via input_id(j, t).
  OutputRange u_range(int section) const;
  int input_id(int section, int local) const;
  int section_of(int input) const;
  int local_index(int input) const;

  bool operator==(const Concentrator& other) const;

  /// Structural assembly used by the parser and the builders. Validates
  /// parameter relations and adjacency shape, not adjacency content.
  static Concentrator from_raw_parts(TopologyKind kind, int n, int m, int q,
                                     int p, std::vector<std::vector<int>> rows,
                                     AdjacencyStorage storage);

 private:
  Concentrator() = default;

  void check_input(int input) const;

  TopologyKind kind_ = TopologyKind::FullFatSlim;
  int n_ = 0;
  int m_ = 0;
  int q_ = 0;  // bounded only
  int c_ = 0;  // bounded: floor(m/q); otherwise m
  int p_ = 0;  // regular only
  AdjacencyStorage storage_ = AdjacencyStorage::Explicit;
  std::vector<std::vector<int>> rows_;  // empty when Formulaic
};

Concentrator build_full_fat_slim(
    int n, int m, AdjacencyStorage storage = AdjacencyStorage::Explicit);
Concentrator build_bounded_fat_slim(
    int n, int m, int q, AdjacencyStorage storage = AdjacencyStorage::Explicit);
Concentrator build_regular_fat_slim(
    int p, int m, AdjacencyStorage storage = AdjacencyStorage::Explicit);

}  // namespace conclab
