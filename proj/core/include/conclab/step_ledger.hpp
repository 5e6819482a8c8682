#pragma once

namespace conclab {

/// Tally of unit-cost classical steps spent by one routing call. Each
/// counter covers one O(1) operation in the word-parallel model: a bit
/// read, a bit write, one pairing, or one list insert/remove.
struct StepLedger {
  long long array_reads = 0;
  long long array_writes = 0;
  long long pairings = 0;
  long long list_ops = 0;

  long long total() const {
    return array_reads + array_writes + pairings + list_ops;
  }

  StepLedger& operator+=(const StepLedger& other) {
    array_reads += other.array_reads;
    array_writes += other.array_writes;
    pairings += other.pairings;
    list_ops += other.list_ops;
    return *this;
  }
};

}  // namespace conclab
