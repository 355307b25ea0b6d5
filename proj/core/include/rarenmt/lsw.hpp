#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "rarenmt/corpus.hpp"
#include "rarenmt/vocabulary.hpp"

namespace rarenmt {

// Symmetric word-pair store: b is a synonym of a iff a is a synonym of b.
// Self-pairs are dropped; duplicates are deduped.
class SynonymStore {
 public:
  // TSV with two words per line. Malformed lines are skipped with a warning
  // carrying the line number; self-pairs are dropped with a warning.
  static SynonymStore load(const std::string& path);

  void add_pair(const std::string& a, const std::string& b);

  // Synonyms of `word` in lexicographic order; empty when unknown.
  const std::vector<std::string>& synonyms(const std::string& word) const;

  std::size_t word_count() const { return synonyms_.size(); }
  // Number of well-formed non-self pairs ingested, before symmetric closure
  // and dedup.
  std::size_t raw_pair_count() const { return raw_pairs_; }

 private:
  std::unordered_map<std::string, std::vector<std::string>> synonyms_;
  std::size_t raw_pairs_ = 0;
};

// OOV/rare word -> in-vocabulary synonyms, ordered by descending training
// frequency (ties lexicographic). Only words with at least one surviving
// candidate get an entry.
class SynonymTable {
 public:
  static SynonymTable learn(const Vocabulary& train_vocab, const Corpus& input_text,
                            const SynonymStore& store, std::uint64_t threshold = 0);

  // File format: `word<TAB>syn1,syn2,...` per line, words sorted
  // lexicographically for a canonical serialization.
  void save(const std::string& path) const;
  static SynonymTable load(const std::string& path);

  const std::vector<std::string>* lookup(const std::string& word) const;
  const std::map<std::string, std::vector<std::string>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  void insert(const std::string& word, std::vector<std::string> synonyms);

 private:
  std::map<std::string, std::vector<std::string>> entries_;
};

// Replaces every tabled word by its first (most frequent) synonym.
Corpus apply_lsw(const Corpus& text, const SynonymTable& table, unsigned threads = 1);

// All replacement combinations of one sentence, first variant = 1-best.
struct SentenceVariants {
  std::vector<Sentence> variants;
};

// Per sentence, the cartesian product of the top-n_best synonyms of every
// tabled occurrence, enumerated with the last occurrence varying fastest and
// truncated at max_variants. Sentences without tabled words yield a single
// variant, the sentence itself.
std::vector<SentenceVariants> apply_lsw_variants(const Corpus& text, const SynonymTable& table,
                                                 std::size_t n_best,
                                                 std::size_t max_variants = 64);

struct ReplacementReport {
  std::uint64_t tokens = 0;  // replaced token occurrences
  std::uint64_t types = 0;   // distinct words replaced
};

// Token-level diff between aligned corpora. Throws DataError when the
// corpora are not aligned 1:1.
ReplacementReport report_replacements(const Corpus& before, const Corpus& after,
                                      const SynonymTable& table);

}  // namespace rarenmt
