#include "nesa/folds.hpp"

#include "nesa/errors.hpp"
#include "nesa/rng.hpp"

#include <nlohmann/json.hpp>

#include <array>

namespace nesa {

std::vector<std::vector<std::string>> FoldAssignment::fold_ids() const {
  std::vector<std::vector<std::string>> folds(static_cast<std::size_t>(fold_count));
  for (const auto& [id, fold] : assignment) {
    folds[static_cast<std::size_t>(fold)].push_back(id);
  }
  return folds;
}

std::string FoldAssignment::to_json() const {
  nlohmann::ordered_json j;
  j["fold_count"] = fold_count;
  j["assignment"] = assignment;
  return j.dump(2);
}

FoldAssignment FoldAssignment::from_json(const std::string& text) {
  FoldAssignment fa;
  try {
    nlohmann::json j = nlohmann::json::parse(text);
    fa.fold_count = j.at("fold_count").get<int>();
    fa.assignment = j.at("assignment").get<std::map<std::string, int>>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, std::string("malformed fold assignment: ") + e.what());
  }
  return fa;
}

FoldAssignment split_folds(const std::vector<Record>& records, int fold_count,
                           std::uint64_t seed) {
  require(fold_count >= 2, ErrorKind::config,
          "fold_count must be >= 2, got " + std::to_string(fold_count));

  std::array<std::vector<std::size_t>, kNumClasses> strata;
  for (std::size_t i = 0; i < records.size(); ++i) {
    require(records[i].label.has_value(), ErrorKind::validation,
            "record '" + records[i].id + "' is unlabeled; folds need labels");
    strata[static_cast<std::size_t>(label_index(*records[i].label))].push_back(i);
  }

  for (int c = 0; c < kNumClasses; ++c) {
    const auto& stratum = strata[static_cast<std::size_t>(c)];
    require(stratum.size() >= static_cast<std::size_t>(fold_count), ErrorKind::validation,
            std::string("stratum '") + to_string(label_from_index(c)) + "' has " +
                std::to_string(stratum.size()) + " records, fewer than fold_count " +
                std::to_string(fold_count));
  }

  FoldAssignment fa;
  fa.fold_count = fold_count;
  Rng rng(derive_seed(seed, /*tag=*/0xF01D5ull));
  for (int c = 0; c < kNumClasses; ++c) {
    auto stratum = strata[static_cast<std::size_t>(c)];
    rng.shuffle(stratum);
    for (std::size_t i = 0; i < stratum.size(); ++i) {
      const Record& rec = records[stratum[i]];
      auto [it, inserted] = fa.assignment.emplace(rec.id, static_cast<int>(i % fold_count));
      require(inserted, ErrorKind::validation, "duplicate record id '" + rec.id + "'");
    }
  }
  return fa;
}

}  // namespace nesa
