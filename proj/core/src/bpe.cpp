#include "rarenmt/bpe.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "rarenmt/error.hpp"
#include "rarenmt/parallel.hpp"

namespace rarenmt {

namespace {

const std::string kEow = "</w>";
const char* kMergeFileHeader = "#bpe v1";

using SymbolPair = std::pair<std::string, std::string>;

std::vector<std::string> symbolize(const std::string& word) {
  std::vector<std::string> symbols = utf8_chars(word);
  symbols.push_back(kEow);
  return symbols;
}

// Merges all left-to-right non-overlapping occurrences of (left, right).
std::vector<std::string> merge_symbols(const std::vector<std::string>& symbols,
                                       const std::string& left, const std::string& right) {
  std::vector<std::string> out;
  out.reserve(symbols.size());
  std::size_t i = 0;
  while (i < symbols.size()) {
    if (i + 1 < symbols.size() && symbols[i] == left && symbols[i + 1] == right) {
      out.push_back(left + right);
      i += 2;
    } else {
      out.push_back(symbols[i++]);
    }
  }
  return out;
}

std::string render_pieces(std::vector<std::string> symbols) {
  if (!symbols.empty() && symbols.back() == kEow) {
    symbols.pop_back();
  } else if (!symbols.empty() && symbols.back().size() > kEow.size() &&
             symbols.back().compare(symbols.back().size() - kEow.size(), kEow.size(), kEow) == 0) {
    symbols.back().resize(symbols.back().size() - kEow.size());
  }
  std::string out;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i) out += ' ';
    out += symbols[i];
    if (i + 1 < symbols.size()) out += "@@";
  }
  return out;
}

}  // namespace

MergeList MergeList::prefix(std::size_t n) const {
  std::vector<MergeRule> head(rules_.begin(), rules_.begin() + std::min(n, rules_.size()));
  return MergeList(std::move(head));
}

void MergeList::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write merge file: " + path);
  out << kMergeFileHeader << '\n';
  for (const MergeRule& rule : rules_) out << rule.left << ' ' << rule.right << '\n';
  if (!out) throw DataError("I/O error while writing " + path);
}

MergeList MergeList::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open merge file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty merge file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kMergeFileHeader)
    throw DataError(path + ":1: expected header '" + std::string(kMergeFileHeader) + "'");
  MergeList merges;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t space = line.find(' ');
    if (space == std::string::npos || space == 0 || space + 1 == line.size() ||
        line.find(' ', space + 1) != std::string::npos)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected 'left right'");
    merges.push_back({line.substr(0, space), line.substr(space + 1)});
  }
  if (in.bad()) throw DataError("I/O error while reading " + path);
  return merges;
}

MergeList bpe_learn(const Corpus& corpus, std::size_t num_merges) {
  // Word-type table in lexicographic order so every intermediate structure
  // is independent of hash iteration order.
  std::map<std::string, std::uint64_t> type_counts;
  for (const Sentence& sentence : corpus.sentences)
    for (const std::string& token : sentence) ++type_counts[token];

  struct WordEntry {
    std::vector<std::string> symbols;
    std::uint64_t count;
  };
  std::vector<WordEntry> words;
  words.reserve(type_counts.size());
  for (const auto& [word, count] : type_counts) words.push_back({symbolize(word), count});

  std::map<SymbolPair, std::uint64_t> pair_counts;
  std::map<SymbolPair, std::set<std::size_t>> pair_words;

  auto add_word_pairs = [&](std::size_t id, std::int64_t sign) {
    const WordEntry& w = words[id];
    for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
      SymbolPair p{w.symbols[i], w.symbols[i + 1]};
      if (sign > 0) {
        pair_counts[p] += w.count;
        pair_words[p].insert(id);
      } else {
        auto it = pair_counts.find(p);
        it->second -= w.count;
        if (it->second == 0) {
          pair_counts.erase(it);
          pair_words.erase(p);
        }
      }
    }
  };
  for (std::size_t id = 0; id < words.size(); ++id) add_word_pairs(id, +1);

  MergeList merges;
  for (std::size_t step = 0; step < num_merges; ++step) {
    // pair_counts is ordered, so the first maximum is the lexicographically
    // smallest pair among the most frequent ones.
    const SymbolPair* best = nullptr;
    std::uint64_t best_count = 1;  // require >= 2 occurrences
    for (const auto& [pair, count] : pair_counts) {
      if (count > best_count) {
        best = &pair;
        best_count = count;
      }
    }
    if (!best) break;
    SymbolPair chosen = *best;
    merges.push_back({chosen.first, chosen.second});

    std::set<std::size_t> affected = pair_words[chosen];
    for (std::size_t id : affected) {
      add_word_pairs(id, -1);
      words[id].symbols = merge_symbols(words[id].symbols, chosen.first, chosen.second);
      add_word_pairs(id, +1);
    }
  }
  return merges;
}

namespace {

class BpeApplier {
 public:
  explicit BpeApplier(const MergeList& merges) {
    ranks_.reserve(merges.size());
    for (std::size_t r = 0; r < merges.rules().size(); ++r) {
      const MergeRule& rule = merges.rules()[r];
      ranks_.emplace(rule.left + '\x1F' + rule.right, r);
    }
  }

  // Repeatedly merges the present pair with the lowest rank; equivalent to
  // applying the rules in learned order because a merge can only create
  // pairs of higher rank than itself.
  std::vector<std::string> split(const std::string& word) const {
    std::vector<std::string> symbols = symbolize(word);
    while (symbols.size() > 1) {
      std::size_t best_rank = std::numeric_limits<std::size_t>::max();
      const std::string* left = nullptr;
      const std::string* right = nullptr;
      for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
        auto it = ranks_.find(symbols[i] + '\x1F' + symbols[i + 1]);
        if (it != ranks_.end() && it->second < best_rank) {
          best_rank = it->second;
          left = &symbols[i];
          right = &symbols[i + 1];
        }
      }
      if (!left) break;
      symbols = merge_symbols(symbols, *left, *right);
    }
    return symbols;
  }

 private:
  std::unordered_map<std::string, std::size_t> ranks_;
};

}  // namespace

std::vector<std::string> bpe_split_word(const std::string& word, const MergeList& merges) {
  BpeApplier applier(merges);
  return split_tokens(render_pieces(applier.split(word)));
}

Corpus bpe_apply(const Corpus& corpus, const MergeList& merges, unsigned threads) {
  BpeApplier applier(merges);
  Corpus out;
  out.side = corpus.side;
  out.sentences.resize(corpus.size());
  std::vector<std::unordered_map<std::string, std::string>> caches(
      std::max<std::size_t>(threads, 1));
  parallel_for_index(corpus.size(), threads, [&](std::size_t i) {
    auto& cache = caches[threads <= 1 ? 0 : i % threads];
    Sentence out_sentence;
    for (const std::string& token : corpus.sentences[i]) {
      auto it = cache.find(token);
      if (it == cache.end()) it = cache.emplace(token, render_pieces(applier.split(token))).first;
      Sentence pieces = split_tokens(it->second);
      out_sentence.insert(out_sentence.end(), pieces.begin(), pieces.end());
    }
    out.sentences[i] = std::move(out_sentence);
  });
  return out;
}

}  // namespace rarenmt
