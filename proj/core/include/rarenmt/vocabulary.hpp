#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "rarenmt/corpus.hpp"

namespace rarenmt {

// Frequency-ranked vocabulary truncated to the K most frequent words.
// Entries are kept in descending count order, ties broken lexicographically,
// which makes the serialized form canonical. The four special tokens are
// always members and never count against K.
class Vocabulary {
 public:
  static constexpr int kUnkId = 0;
  static constexpr int kBosId = 1;
  static constexpr int kEosId = 2;
  static constexpr int kPadId = 3;
  static constexpr int kNumSpecial = 4;

  static const std::string& unk_token();
  static const std::string& bos_token();
  static const std::string& eos_token();
  static const std::string& pad_token();
  static bool is_special(const std::string& word);

  struct Entry {
    std::string word;
    std::uint64_t count;
    bool operator==(const Entry&) const = default;
  };

  Vocabulary() = default;

  // Counts every token in the corpus and keeps the K most frequent words.
  // Counts are exact; ties at the K boundary break lexicographically.
  // Tokens spelled like a special token are skipped (with a warning) so the
  // special ids stay unambiguous.
  static Vocabulary build(const Corpus& corpus, std::size_t k);

  // Rebuilds a vocabulary from already-ranked entries (checkpoints, tests).
  static Vocabulary from_entries(std::vector<Entry> entries, std::size_t k);

  // Stored count, 0 for absent words. Membership for regular words is
  // equivalent to freq > 0.
  std::uint64_t freq(const std::string& word) const;
  bool contains(const std::string& word) const;  // true for special tokens

  // Ids: specials take 0..3, entries follow in rank order.
  int id(const std::string& word) const;  // kUnkId for absent words
  const std::string& word_for(int id) const;

  std::size_t size() const { return kNumSpecial + entries_.size(); }
  std::size_t num_entries() const { return entries_.size(); }
  std::size_t capacity() const { return k_; }
  const std::vector<Entry>& entries() const { return entries_; }

  // TSV with a header line carrying K, then `word<TAB>count` rows in
  // iteration order. load(save(v)) reproduces entries, counts, K and order
  // exactly; re-saving yields a byte-identical file.
  void save(const std::string& path) const;
  static Vocabulary load(const std::string& path);

 private:
  std::size_t k_ = 0;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, int> index_;  // word -> position in entries_

  void rebuild_index();
};

}  // namespace rarenmt
