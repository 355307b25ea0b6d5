#pragma once

#include <string>
#include <vector>

#include "rarenmt/corpus.hpp"

namespace rarenmt {

struct MergeRule {
  std::string left;
  std::string right;
  bool operator==(const MergeRule&) const = default;
};

// Ordered merge rules; the order is part of the artifact and the file.
class MergeList {
 public:
  MergeList() = default;
  explicit MergeList(std::vector<MergeRule> rules) : rules_(std::move(rules)) {}

  const std::vector<MergeRule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  void push_back(MergeRule rule) { rules_.push_back(std::move(rule)); }

  // Keeps only the first n rules; used for monotonicity checks.
  MergeList prefix(std::size_t n) const;

  // One `left<SPACE>right` pair per line in learned order, version header.
  void save(const std::string& path) const;
  static MergeList load(const std::string& path);

  bool operator==(const MergeList&) const = default;

 private:
  std::vector<MergeRule> rules_;
};

// Learns merge rules: words split into code points plus an end-of-word
// symbol, then the most frequent adjacent pair is merged repeatedly. Ties
// break lexicographically on (left, right). Stops after num_merges rules or
// when no pair occurs at least twice.
MergeList bpe_learn(const Corpus& corpus, std::size_t num_merges);

// Deterministic greedy application in rule order. Non-final pieces carry a
// trailing `@@` joiner; fully merged words come out bare.
std::vector<std::string> bpe_split_word(const std::string& word, const MergeList& merges);
Corpus bpe_apply(const Corpus& corpus, const MergeList& merges, unsigned threads = 1);

}  // namespace rarenmt
