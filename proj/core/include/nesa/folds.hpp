#pragma once

#include "nesa/record.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nesa {

struct FoldAssignment {
  int fold_count = 0;
  std::map<std::string, int> assignment;  // record id -> fold index

  std::vector<std::vector<std::string>> fold_ids() const;
  std::string to_json() const;
  static FoldAssignment from_json(const std::string& text);
};

// Deterministic stratified split: per label stratum, records are shuffled
// with the seeded generator and dealt round-robin, so per-fold counts
// within a stratum differ by at most one.
FoldAssignment split_folds(const std::vector<Record>& records, int fold_count,
                           std::uint64_t seed);

}  // namespace nesa
