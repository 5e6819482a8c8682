#include "conclab/topology.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace conclab {
namespace {

// Explicit rows are refused above this many crosspoints; callers that need
// bigger instances pass AdjacencyStorage::Formulaic.
constexpr long long kExplicitCrosspointLimit = 1LL << 25;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

std::string to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::FullFatSlim: return "full";
    case TopologyKind::BoundedFatSlim: return "bounded";
    case TopologyKind::RegularFatSlim: return "regular";
  }
  return "unknown";
}

int Concentrator::fat_width() const {
  if (kind_ != TopologyKind::BoundedFatSlim)
    throw std::logic_error("fat_width: not a bounded concentrator");
  return q_;
}

int Concentrator::capacity() const { return c_; }

int Concentrator::sections() const {
  if (kind_ != TopologyKind::RegularFatSlim)
    throw std::logic_error("sections: not a regular concentrator");
  return p_;
}

int Concentrator::section_width() const {
  if (kind_ != TopologyKind::RegularFatSlim)
    throw std::logic_error("section_width: not a regular concentrator");
  return m_ / p_;
}

void Concentrator::check_input(int input) const {
  if (input < 1 || input > n_)
    throw std::out_of_range("input index " + std::to_string(input) +
                            " outside 1.." + std::to_string(n_));
}

std::span<const int> Concentrator::neighbors(int input) const {
  check_input(input);
  if (storage_ != AdjacencyStorage::Explicit)
    throw std::logic_error("neighbors: adjacency not materialized");
  return rows_[static_cast<size_t>(input) - 1];
}

std::vector<int> Concentrator::neighbor_list(int input) const {
  check_input(input);
  if (storage_ == AdjacencyStorage::Explicit)
    return rows_[static_cast<size_t>(input) - 1];
  std::vector<int> out;
  switch (kind_) {
    case TopologyKind::FullFatSlim:
      if (input <= n_ - m_) {
        out.resize(static_cast<size_t>(m_));
        std::iota(out.begin(), out.end(), 1);
      } else {
        out.push_back(input - (n_ - m_));
      }
      break;
    case TopologyKind::BoundedFatSlim:
      if (input <= n_ - q_) {
        out.push_back(input);
      } else {
        const int i = input - (n_ - q_);
        for (int j = 0; j < c_; ++j) out.push_back(i + q_ * j);
      }
      break;
    case TopologyKind::RegularFatSlim: {
      const int g = m_ / p_;
      const int sec = section_of(input);
      const int local = local_index(input);
      const OutputRange u{(sec - 1) * g + 1, sec * g};
      out.reserve(static_cast<size_t>(m_ - g + 1));
      for (int o = 1; o < u.first; ++o) out.push_back(o);
      if (u.contains(local)) out.push_back(local);
      for (int o = u.last + 1; o <= m_; ++o) out.push_back(o);
      break;
    }
  }
  return out;
}

int Concentrator::degree(int input) const {
  check_input(input);
  if (storage_ == AdjacencyStorage::Explicit)
    return static_cast<int>(rows_[static_cast<size_t>(input) - 1].size());
  switch (kind_) {
    case TopologyKind::FullFatSlim:
      return input <= n_ - m_ ? m_ : 1;
    case TopologyKind::BoundedFatSlim:
      return input <= n_ - q_ ? 1 : c_;
    case TopologyKind::RegularFatSlim: {
      const int g = m_ / p_;
      const int sec = section_of(input);
      const int local = local_index(input);
      const OutputRange u{(sec - 1) * g + 1, sec * g};
      return m_ - g + (u.contains(local) ? 1 : 0);
    }
  }
  return 0;
}

bool Concentrator::has_crosspoint(int input, int output) const {
  check_input(input);
  if (output < 1 || output > m_) return false;
  if (storage_ == AdjacencyStorage::Explicit) {
    const auto& row = rows_[static_cast<size_t>(input) - 1];
    return std::binary_search(row.begin(), row.end(), output);
  }
  switch (kind_) {
    case TopologyKind::FullFatSlim:
      return input <= n_ - m_ || output == input - (n_ - m_);
    case TopologyKind::BoundedFatSlim: {
      if (input <= n_ - q_) return output == input;
      const int i = input - (n_ - q_);
      if (output < i) return false;
      const int diff = output - i;
      return diff % q_ == 0 && diff / q_ < c_;
    }
    case TopologyKind::RegularFatSlim: {
      const int g = m_ / p_;
      const int sec = section_of(input);
      const OutputRange u{(sec - 1) * g + 1, sec * g};
      if (!u.contains(output)) return true;
      return output == local_index(input);
    }
  }
  return false;
}

long long Concentrator::crosspoint_count() const {
  if (storage_ == AdjacencyStorage::Explicit) {
    long long total = 0;
    for (const auto& row : rows_) total += static_cast<long long>(row.size());
    return total;
  }
  switch (kind_) {
    case TopologyKind::FullFatSlim:
      return static_cast<long long>(n_ - m_ + 1) * m_;
    case TopologyKind::BoundedFatSlim:
      return static_cast<long long>(n_ - q_) +
             static_cast<long long>(q_) * c_;
    case TopologyKind::RegularFatSlim:
      return static_cast<long long>(m_) * (n_ - m_ + 1);
  }
  return 0;
}

OutputRange Concentrator::u_range(int section) const {
  if (kind_ != TopologyKind::RegularFatSlim)
    throw std::logic_error("u_range: not a regular concentrator");
  if (section < 1 || section > p_)
    throw std::out_of_range("section index outside 1..p");
  const int g = m_ / p_;
  return {(section - 1) * g + 1, section * g};
}

int Concentrator::input_id(int section, int local) const {
  if (kind_ != TopologyKind::RegularFatSlim)
    throw std::logic_error("input_id: not a regular concentrator");
  if (section < 1 || section > p_ || local < 1 || local > m_)
    throw std::out_of_range("section/local index out of range");
  return (section - 1) * m_ + local;
}

int Concentrator::section_of(int input) const {
  if (kind_ != TopologyKind::RegularFatSlim)
    throw std::logic_error("section_of: not a regular concentrator");
  check_input(input);
  return (input - 1) / m_ + 1;
}

int Concentrator::local_index(int input) const {
  if (kind_ != TopologyKind::RegularFatSlim)
    throw std::logic_error("local_index: not a regular concentrator");
  check_input(input);
  return input - (section_of(input) - 1) * m_;
}

bool Concentrator::operator==(const Concentrator& other) const {
  if (kind_ != other.kind_ || n_ != other.n_ || m_ != other.m_ ||
      q_ != other.q_ || c_ != other.c_ || p_ != other.p_)
    return false;
  if (storage_ == AdjacencyStorage::Explicit &&
      other.storage_ == AdjacencyStorage::Explicit)
    return rows_ == other.rows_;
  for (int i = 1; i <= n_; ++i)
    if (neighbor_list(i) != other.neighbor_list(i)) return false;
  return true;
}

Concentrator Concentrator::from_raw_parts(TopologyKind kind, int n, int m,
                                          int q, int p,
                                          std::vector<std::vector<int>> rows,
                                          AdjacencyStorage storage) {
  require(n >= 1, "input count must be positive");
  require(m >= 1, "output count must be positive");
  Concentrator conc;
  conc.kind_ = kind;
  conc.n_ = n;
  conc.m_ = m;
  conc.storage_ = storage;
  switch (kind) {
    case TopologyKind::FullFatSlim:
      require(m <= n, "full fat-and-slim requires m <= n");
      conc.c_ = m;
      break;
    case TopologyKind::BoundedFatSlim:
      require(n > m, "bounded fat-and-slim requires n > m");
      require(q >= n - m, "fat width q must be at least n - m");
      require(q <= m, "fat width q must be at most m");
      conc.q_ = q;
      conc.c_ = m / q;
      break;
    case TopologyKind::RegularFatSlim:
      require(p >= 3, "regular fat-and-slim requires p >= 3");
      require(m % p == 0, "regular fat-and-slim requires p to divide m");
      require(n == p * m, "regular fat-and-slim requires n = p*m");
      conc.p_ = p;
      conc.c_ = m;
      break;
  }
  if (storage == AdjacencyStorage::Explicit) {
    require(static_cast<int>(rows.size()) == n,
            "adjacency must list every input exactly once");
    for (int i = 0; i < n; ++i) {
      const auto& row = rows[static_cast<size_t>(i)];
      for (size_t t = 0; t < row.size(); ++t) {
        require(row[t] >= 1 && row[t] <= m,
                "adjacency entry for input " + std::to_string(i + 1) +
                    " outside 1.." + std::to_string(m));
        require(t == 0 || row[t] > row[t - 1],
                "adjacency row for input " + std::to_string(i + 1) +
                    " must be strictly ascending");
      }
    }
    conc.rows_ = std::move(rows);
  } else {
    require(rows.empty(), "formulaic storage carries no rows");
  }
  return conc;
}

Concentrator build_full_fat_slim(int n, int m, AdjacencyStorage storage) {
  require(m >= 1, "output count must be at least 1");
  require(m <= n, "output count must not exceed input count");
  std::vector<std::vector<int>> rows;
  if (storage == AdjacencyStorage::Explicit) {
    require(static_cast<long long>(n - m + 1) * m <= kExplicitCrosspointLimit,
            "instance too large for explicit adjacency; use formulaic storage");
    rows.resize(static_cast<size_t>(n));
    std::vector<int> all(static_cast<size_t>(m));
    std::iota(all.begin(), all.end(), 1);
    for (int i = 1; i <= n - m; ++i) rows[static_cast<size_t>(i) - 1] = all;
    for (int i = 1; i <= m; ++i)
      rows[static_cast<size_t>(n - m + i) - 1] = {i};
  }
  return Concentrator::from_raw_parts(TopologyKind::FullFatSlim, n, m, 0, 0,
                                      std::move(rows), storage);
}

Concentrator build_bounded_fat_slim(int n, int m, int q,
                                    AdjacencyStorage storage) {
  require(n > m, "bounded fat-and-slim requires n > m");
  require(q >= n - m, "fat width q must be at least n - m");
  require(q <= m, "fat width q must be at most m");
  const int c = m / q;
  std::vector<std::vector<int>> rows;
  if (storage == AdjacencyStorage::Explicit) {
    require(static_cast<long long>(n - q) + static_cast<long long>(q) * c <=
                kExplicitCrosspointLimit,
            "instance too large for explicit adjacency; use formulaic storage");
    rows.resize(static_cast<size_t>(n));
    for (int i = 1; i <= n - q; ++i) rows[static_cast<size_t>(i) - 1] = {i};
    for (int i = 1; i <= q; ++i) {
      auto& row = rows[static_cast<size_t>(n - q + i) - 1];
      for (int j = 0; j < c; ++j) row.push_back(i + q * j);
    }
  }
  return Concentrator::from_raw_parts(TopologyKind::BoundedFatSlim, n, m, q, 0,
                                      std::move(rows), storage);
}

Concentrator build_regular_fat_slim(int p, int m, AdjacencyStorage storage) {
  require(p >= 3, "regular fat-and-slim requires p >= 3");
  require(m >= 1 && m % p == 0, "regular fat-and-slim requires p to divide m");
  const int n = p * m;
  const int g = m / p;
  std::vector<std::vector<int>> rows;
  if (storage == AdjacencyStorage::Explicit) {
    require(static_cast<long long>(m) * (n - m + 1) <= kExplicitCrosspointLimit,
            "instance too large for explicit adjacency; use formulaic storage");
    rows.resize(static_cast<size_t>(n));
    for (int j = 1; j <= p; ++j) {
      const OutputRange u{(j - 1) * g + 1, j * g};
      for (int k = 1; k <= m; ++k) {
        auto& row = rows[static_cast<size_t>((j - 1) * m + k) - 1];
        row.reserve(static_cast<size_t>(m - g + 1));
        for (int o = 1; o < u.first; ++o) row.push_back(o);
        if (u.contains(k)) row.push_back(k);
        for (int o = u.last + 1; o <= m; ++o) row.push_back(o);
      }
    }
  }
  return Concentrator::from_raw_parts(TopologyKind::RegularFatSlim, n, m, 0, p,
                                      std::move(rows), storage);
}

}  // namespace conclab
