#include "rarenmt/lsw.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>

#include "rarenmt/error.hpp"
#include "rarenmt/parallel.hpp"

namespace rarenmt {

namespace {
const std::vector<std::string> kNoSynonyms;

void insert_sorted_unique(std::vector<std::string>& list, const std::string& word) {
  auto it = std::lower_bound(list.begin(), list.end(), word);
  if (it == list.end() || *it != word) list.insert(it, word);
}
}  // namespace

SynonymStore SynonymStore::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open synonym pair file: " + path);
  SynonymStore store;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string::npos) {
      std::cerr << "warning: " << path << ":" << line_no << ": malformed synonym pair, skipped\n";
      continue;
    }
    std::string a = line.substr(0, tab);
    std::string b = line.substr(tab + 1);
    if (a == b) {
      std::cerr << "warning: " << path << ":" << line_no << ": self-pair '" << a << "' dropped\n";
      continue;
    }
    store.add_pair(a, b);
  }
  if (in.bad()) throw DataError("I/O error while reading " + path);
  return store;
}

void SynonymStore::add_pair(const std::string& a, const std::string& b) {
  if (a == b || a.empty() || b.empty()) return;
  ++raw_pairs_;
  insert_sorted_unique(synonyms_[a], b);
  insert_sorted_unique(synonyms_[b], a);
}

const std::vector<std::string>& SynonymStore::synonyms(const std::string& word) const {
  auto it = synonyms_.find(word);
  return it == synonyms_.end() ? kNoSynonyms : it->second;
}

SynonymTable SynonymTable::learn(const Vocabulary& train_vocab, const Corpus& input_text,
                                 const SynonymStore& store, std::uint64_t threshold) {
  SynonymTable table;
  std::set<std::string> seen;
  for (const Sentence& sentence : input_text.sentences) {
    for (const std::string& word : sentence) {
      if (!seen.insert(word).second) continue;
      bool rare = !train_vocab.contains(word) || train_vocab.freq(word) <= threshold;
      if (!rare) continue;
      std::vector<std::string> candidates;
      for (const std::string& candidate : store.synonyms(word))
        if (train_vocab.freq(candidate) > 0) candidates.push_back(candidate);
      if (candidates.empty()) continue;
      std::stable_sort(candidates.begin(), candidates.end(),
                       [&](const std::string& a, const std::string& b) {
                         auto fa = train_vocab.freq(a), fb = train_vocab.freq(b);
                         if (fa != fb) return fa > fb;
                         return a < b;
                       });
      table.entries_[word] = std::move(candidates);
    }
  }
  return table;
}

void SynonymTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write synonym table: " + path);
  for (const auto& [word, synonyms] : entries_) {
    out << word << '\t';
    for (std::size_t i = 0; i < synonyms.size(); ++i) {
      if (i) out << ',';
      out << synonyms[i];
    }
    out << '\n';
  }
  if (!out) throw DataError("I/O error while writing " + path);
}

SynonymTable SynonymTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open synonym table: " + path);
  SynonymTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
      throw DataError(path + ":" + std::to_string(line_no) + ": expected 'word<TAB>syn1,syn2,...'");
    std::string word = line.substr(0, tab);
    std::vector<std::string> synonyms;
    std::size_t start = tab + 1;
    while (start <= line.size()) {
      std::size_t comma = line.find(',', start);
      std::size_t end = comma == std::string::npos ? line.size() : comma;
      if (end == start)
        throw DataError(path + ":" + std::to_string(line_no) + ": empty synonym");
      synonyms.push_back(line.substr(start, end - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    table.entries_[word] = std::move(synonyms);
  }
  if (in.bad()) throw DataError("I/O error while reading " + path);
  return table;
}

const std::vector<std::string>* SynonymTable::lookup(const std::string& word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

void SynonymTable::insert(const std::string& word, std::vector<std::string> synonyms) {
  entries_[word] = std::move(synonyms);
}

Corpus apply_lsw(const Corpus& text, const SynonymTable& table, unsigned threads) {
  Corpus out;
  out.side = text.side;
  out.sentences.resize(text.size());
  parallel_for_index(text.size(), threads, [&](std::size_t i) {
    Sentence sentence = text.sentences[i];
    for (std::string& token : sentence)
      if (const auto* synonyms = table.lookup(token)) token = synonyms->front();
    out.sentences[i] = std::move(sentence);
  });
  return out;
}

std::vector<SentenceVariants> apply_lsw_variants(const Corpus& text, const SynonymTable& table,
                                                 std::size_t n_best, std::size_t max_variants) {
  if (n_best == 0) throw UsageError("n_best must be >= 1");
  std::vector<SentenceVariants> result(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const Sentence& sentence = text.sentences[i];
    std::vector<std::size_t> positions;
    std::vector<const std::vector<std::string>*> choices;
    for (std::size_t t = 0; t < sentence.size(); ++t) {
      if (const auto* synonyms = table.lookup(sentence[t])) {
        positions.push_back(t);
        choices.push_back(synonyms);
      }
    }
    if (positions.empty()) {
      result[i].variants.push_back(sentence);
      continue;
    }
    // Odometer over per-position candidate indices, last position fastest,
    // so the first emitted variant is the all-1-best sentence.
    std::vector<std::size_t> counter(positions.size(), 0);
    bool done = false;
    while (!done && result[i].variants.size() < max_variants) {
      Sentence variant = sentence;
      for (std::size_t p = 0; p < positions.size(); ++p)
        variant[positions[p]] = (*choices[p])[counter[p]];
      result[i].variants.push_back(std::move(variant));
      std::size_t p = positions.size();
      while (true) {
        if (p == 0) {
          done = true;  // odometer wrapped all the way around
          break;
        }
        --p;
        std::size_t limit = std::min(n_best, choices[p]->size());
        if (++counter[p] < limit) break;
        counter[p] = 0;
      }
    }
  }
  return result;
}

ReplacementReport report_replacements(const Corpus& before, const Corpus& after,
                                      const SynonymTable& table) {
  (void)table;  // counts come from the token-level diff alone
  if (before.size() != after.size())
    throw DataError("replacement report: sentence counts differ");
  ReplacementReport report;
  std::set<std::string> types;
  for (std::size_t i = 0; i < before.size(); ++i) {
    const Sentence& b = before.sentences[i];
    const Sentence& a = after.sentences[i];
    if (b.size() != a.size())
      throw DataError("replacement report: sentence " + std::to_string(i + 1) +
                      " token counts differ");
    for (std::size_t t = 0; t < b.size(); ++t) {
      if (b[t] != a[t]) {
        ++report.tokens;
        types.insert(b[t]);
      }
    }
  }
  report.types = types.size();
  return report;
}

}  // namespace rarenmt
