#include "rarenmt/corpus.hpp"

#include <cctype>
#include <fstream>

#include "rarenmt/error.hpp"

namespace rarenmt {

Sentence split_tokens(const std::string& line) {
  Sentence tokens;
  std::size_t i = 0;
  const std::size_t n = line.size();
  while (i < n) {
    while (i < n && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < n && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.emplace_back(line, start, i - start);
  }
  return tokens;
}

std::string join_tokens(const Sentence& sentence) {
  std::string out;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (i) out += ' ';
    out += sentence[i];
  }
  return out;
}

Corpus load_corpus(const std::string& path, Side side) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file: " + path);
  Corpus corpus;
  corpus.side = side;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::size_t bad = find_invalid_utf8(line); bad != std::string::npos) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": invalid UTF-8 at byte offset " + std::to_string(bad));
    }
    corpus.sentences.push_back(split_tokens(line));
  }
  if (in.bad()) throw DataError("I/O error while reading " + path);
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write corpus file: " + path);
  for (const Sentence& s : corpus.sentences) out << join_tokens(s) << '\n';
  if (!out) throw DataError("I/O error while writing " + path);
}

ParallelCorpus ParallelCorpus::load(const std::string& source_path,
                                    const std::string& target_path) {
  ParallelCorpus parallel;
  parallel.source = load_corpus(source_path, Side::source);
  parallel.target = load_corpus(target_path, Side::target);
  if (parallel.source.size() != parallel.target.size())
    throw DataError("parallel corpus line counts differ: " + source_path + " has " +
                    std::to_string(parallel.source.size()) + ", " + target_path + " has " +
                    std::to_string(parallel.target.size()));
  return parallel;
}

std::size_t find_invalid_utf8(const std::string& text) {
  const auto* p = reinterpret_cast<const unsigned char*>(text.data());
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    unsigned char b = p[i];
    if (b < 0x80) {
      ++i;
      continue;
    }
    std::size_t len;
    unsigned cp, cp_min;
    if ((b & 0xE0) == 0xC0) {
      len = 2, cp = b & 0x1Fu, cp_min = 0x80;
    } else if ((b & 0xF0) == 0xE0) {
      len = 3, cp = b & 0x0Fu, cp_min = 0x800;
    } else if ((b & 0xF8) == 0xF0) {
      len = 4, cp = b & 0x07u, cp_min = 0x10000;
    } else {
      return i;
    }
    if (i + len > n) return i;
    for (std::size_t k = 1; k < len; ++k) {
      if ((p[i + k] & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (p[i + k] & 0x3Fu);
    }
    if (cp < cp_min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
    i += len;
  }
  return std::string::npos;
}

std::vector<std::string> utf8_chars(const std::string& word) {
  std::vector<std::string> chars;
  std::size_t i = 0;
  while (i < word.size()) {
    unsigned char b = static_cast<unsigned char>(word[i]);
    std::size_t len = b < 0x80 ? 1 : (b & 0xE0) == 0xC0 ? 2 : (b & 0xF0) == 0xE0 ? 3 : 4;
    if (i + len > word.size()) len = word.size() - i;  // tolerate truncation
    chars.push_back(word.substr(i, len));
    i += len;
  }
  return chars;
}

std::size_t utf8_length(const std::string& word) {
  std::size_t count = 0;
  for (unsigned char b : word)
    if ((b & 0xC0) != 0x80) ++count;
  return count;
}

}  // namespace rarenmt
