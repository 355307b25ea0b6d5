#include "rarenmt/vocabulary.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>

#include "rarenmt/error.hpp"

namespace rarenmt {

namespace {
const std::string kUnk = "<unk>";
const std::string kBos = "<s>";
const std::string kEos = "</s>";
const std::string kPad = "<pad>";
}  // namespace

const std::string& Vocabulary::unk_token() { return kUnk; }
const std::string& Vocabulary::bos_token() { return kBos; }
const std::string& Vocabulary::eos_token() { return kEos; }
const std::string& Vocabulary::pad_token() { return kPad; }

bool Vocabulary::is_special(const std::string& word) {
  return word == kUnk || word == kBos || word == kEos || word == kPad;
}

Vocabulary Vocabulary::build(const Corpus& corpus, std::size_t k) {
  if (k == 0) throw UsageError("vocabulary capacity K must be >= 1");
  std::unordered_map<std::string, std::uint64_t> counts;
  bool warned_special = false;
  for (const Sentence& sentence : corpus.sentences) {
    for (const std::string& token : sentence) {
      if (is_special(token)) {
        if (!warned_special) {
          std::cerr << "warning: corpus contains reserved token " << token
                    << "; occurrences are not counted\n";
          warned_special = true;
        }
        continue;
      }
      ++counts[token];
    }
  }

  Vocabulary vocab;
  vocab.k_ = k;
  vocab.entries_.reserve(counts.size());
  for (auto& [word, count] : counts) vocab.entries_.push_back({word, count});
  std::sort(vocab.entries_.begin(), vocab.entries_.end(),
            [](const Entry& a, const Entry& b) {
              if (a.count != b.count) return a.count > b.count;
              return a.word < b.word;
            });
  if (vocab.entries_.size() > k) vocab.entries_.resize(k);
  vocab.rebuild_index();
  return vocab;
}

Vocabulary Vocabulary::from_entries(std::vector<Entry> entries, std::size_t k) {
  if (k == 0) throw UsageError("vocabulary capacity K must be >= 1");
  if (entries.size() > k) throw UsageError("entry count exceeds capacity K");
  Vocabulary vocab;
  vocab.k_ = k;
  vocab.entries_ = std::move(entries);
  vocab.rebuild_index();
  return vocab;
}

std::uint64_t Vocabulary::freq(const std::string& word) const {
  auto it = index_.find(word);
  return it == index_.end() ? 0 : entries_[it->second].count;
}

bool Vocabulary::contains(const std::string& word) const {
  return is_special(word) || index_.count(word) > 0;
}

int Vocabulary::id(const std::string& word) const {
  if (word == kUnk) return kUnkId;
  if (word == kBos) return kBosId;
  if (word == kEos) return kEosId;
  if (word == kPad) return kPadId;
  auto it = index_.find(word);
  return it == index_.end() ? kUnkId : kNumSpecial + it->second;
}

const std::string& Vocabulary::word_for(int id) const {
  switch (id) {
    case kUnkId: return kUnk;
    case kBosId: return kBos;
    case kEosId: return kEos;
    case kPadId: return kPad;
    default: break;
  }
  std::size_t pos = static_cast<std::size_t>(id) - kNumSpecial;
  if (pos >= entries_.size()) throw UsageError("vocabulary id out of range: " + std::to_string(id));
  return entries_[pos].word;
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write vocabulary file: " + path);
  out << "#K\t" << k_ << '\n';
  for (const Entry& e : entries_) out << e.word << '\t' << e.count << '\n';
  if (!out) throw DataError("I/O error while writing " + path);
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open vocabulary file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty vocabulary file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind("#K\t", 0) != 0) throw DataError(path + ":1: expected '#K<TAB>capacity' header");

  Vocabulary vocab;
  const char* first = line.data() + 3;
  const char* last = line.data() + line.size();
  auto [ptr, ec] = std::from_chars(first, last, vocab.k_);
  if (ec != std::errc() || ptr != last || vocab.k_ == 0)
    throw DataError(path + ":1: malformed capacity in header");

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected 'word<TAB>count'");
    Entry e;
    e.word = line.substr(0, tab);
    const char* cfirst = line.data() + tab + 1;
    const char* clast = line.data() + line.size();
    auto [cptr, cec] = std::from_chars(cfirst, clast, e.count);
    if (cec != std::errc() || cptr != clast)
      throw DataError(path + ":" + std::to_string(line_no) + ": malformed count");
    vocab.entries_.push_back(std::move(e));
  }
  if (in.bad()) throw DataError("I/O error while reading " + path);
  if (vocab.entries_.size() > vocab.k_)
    throw DataError(path + ": entry count exceeds capacity K");
  vocab.rebuild_index();
  return vocab;
}

void Vocabulary::rebuild_index() {
  index_.clear();
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    auto [it, inserted] = index_.emplace(entries_[i].word, static_cast<int>(i));
    if (!inserted) throw DataError("duplicate vocabulary entry: " + entries_[i].word);
  }
}

}  // namespace rarenmt
