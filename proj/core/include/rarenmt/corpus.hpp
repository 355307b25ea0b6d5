#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace rarenmt {

// One tokenized sentence: whitespace-split surface forms. Tokens are
// never empty and never contain whitespace.
using Sentence = std::vector<std::string>;

enum class Side { source, target };

struct Corpus {
  std::vector<Sentence> sentences;
  Side side = Side::source;

  std::size_t size() const { return sentences.size(); }
  bool operator==(const Corpus&) const = default;
};

// Splits a line on runs of whitespace. "a  b" -> {a, b}.
Sentence split_tokens(const std::string& line);
std::string join_tokens(const Sentence& sentence);

// Reads one sentence per line. Empty lines become empty sentences so that
// parallel files keep their alignment. Throws DataError for unreadable
// files and for invalid UTF-8 (with the offending line number).
Corpus load_corpus(const std::string& path, Side side);

// Writes one sentence per line, tokens joined by single spaces.
void save_corpus(const Corpus& corpus, const std::string& path);

// Aligned source/target corpora; both sides always have the same number of
// sentences.
struct ParallelCorpus {
  Corpus source;
  Corpus target;

  std::size_t size() const { return source.size(); }

  // Throws DataError when the two files have different line counts.
  static ParallelCorpus load(const std::string& source_path, const std::string& target_path);
};

// Byte offset of the first ill-formed UTF-8 sequence, or npos if clean.
std::size_t find_invalid_utf8(const std::string& text);

// Splits well-formed UTF-8 into code points.
std::vector<std::string> utf8_chars(const std::string& word);
std::size_t utf8_length(const std::string& word);

}  // namespace rarenmt
