#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rarenmt/corpus.hpp"
#include "rarenmt/vocabulary.hpp"

namespace rarenmt {

// Ordered prefix/suffix lists driving affix separation. Matching iterates
// longest-first, ties lexicographic, so the stored order is canonical and
// segmentation is deterministic.
class AffixInventory {
 public:
  static AffixInventory make(std::vector<std::string> prefixes,
                             std::vector<std::string> suffixes);

  // Built-in list of 52 common English affixes (20 prefixes, 32 suffixes).
  // User-replaceable via load().
  static AffixInventory default_english();

  // File format: one `prefix<TAB>string` or `suffix<TAB>string` per line,
  // `#` comments allowed. Duplicates are deduped with a warning; empty
  // affixes are rejected with the line number.
  static AffixInventory load(const std::string& path);
  void save(const std::string& path) const;

  const std::vector<std::string>& prefixes() const { return prefixes_; }
  const std::vector<std::string>& suffixes() const { return suffixes_; }
  std::size_t size() const { return prefixes_.size() + suffixes_.size(); }

  bool operator==(const AffixInventory&) const = default;

 private:
  std::vector<std::string> prefixes_;
  std::vector<std::string> suffixes_;
};

// A word split into at most one prefix, a stem and at most one suffix.
// Concatenating the three parts reproduces the original word exactly.
struct Segmentation {
  std::optional<std::string> prefix;
  std::string stem;
  std::optional<std::string> suffix;
  bool operator==(const Segmentation&) const = default;
};

struct SaaOptions {
  // Words with freq <= threshold (or absent from the vocabulary) are
  // candidates for splitting.
  std::uint64_t threshold = 1;
  // Candidate stems shorter than this many code points are rejected, which
  // avoids degenerate splits like "a@@ s". Set to 1 to disable.
  std::size_t min_stem_chars = 2;
};

// Tries to strip one prefix then one suffix so that the remaining stem is a
// vocabulary member. Returns nothing for frequent words and for words where
// neither affix matches with an in-vocabulary remainder.
std::optional<Segmentation> segment_word(const std::string& word, const Vocabulary& vocab,
                                         const AffixInventory& inventory,
                                         const SaaOptions& options = {});

// [prefix@@]? stem [@@suffix]?
Sentence render_segmentation(const Segmentation& seg);

struct SegmentationReport {
  std::uint64_t types = 0;   // distinct words that were segmented
  std::uint64_t tokens = 0;  // token occurrences replaced
};

struct SaaResult {
  Corpus corpus;
  SegmentationReport report;
};

// Applies segment_word to every token independently, replacing matches by
// their rendered pieces. Sentence order is preserved regardless of threads.
SaaResult apply_saa(const Corpus& text, const Vocabulary& vocab,
                    const AffixInventory& inventory, const SaaOptions& options = {},
                    unsigned threads = 1);

// Inverse of apply_saa: undo_saa(apply_saa(t).corpus) == t.
Corpus undo_saa(const Corpus& text);

}  // namespace rarenmt
