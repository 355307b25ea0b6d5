#include "rarenmt/saa.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <unordered_map>

#include "rarenmt/error.hpp"
#include "rarenmt/parallel.hpp"
#include "rarenmt/subword.hpp"

namespace rarenmt {

namespace {

// Canonical matching order: longest first, ties lexicographic.
void canonicalize(std::vector<std::string>& affixes, const char* kind) {
  std::sort(affixes.begin(), affixes.end(), [](const std::string& a, const std::string& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
  auto dup = std::unique(affixes.begin(), affixes.end());
  if (dup != affixes.end()) {
    for (auto it = dup; it != affixes.end(); ++it)
      std::cerr << "warning: duplicate " << kind << " '" << *it << "' ignored\n";
    affixes.erase(dup, affixes.end());
  }
}

void validate_affix(const std::string& affix, const std::string& context) {
  if (affix.empty()) throw DataError(context + ": empty affix");
  if (affix.find("@@") != std::string::npos)
    throw DataError(context + ": affix must not contain the '@@' marker");
  for (char c : affix)
    if (std::isspace(static_cast<unsigned char>(c)))
      throw DataError(context + ": affix must not contain whitespace");
}

}  // namespace

AffixInventory AffixInventory::make(std::vector<std::string> prefixes,
                                    std::vector<std::string> suffixes) {
  for (const auto& p : prefixes) validate_affix(p, "prefix '" + p + "'");
  for (const auto& s : suffixes) validate_affix(s, "suffix '" + s + "'");
  AffixInventory inv;
  inv.prefixes_ = std::move(prefixes);
  inv.suffixes_ = std::move(suffixes);
  canonicalize(inv.prefixes_, "prefix");
  canonicalize(inv.suffixes_, "suffix");
  return inv;
}

AffixInventory AffixInventory::default_english() {
  // 20 prefixes + 32 suffixes = 52 entries.
  return make(
      {"anti", "de", "dis", "em", "en", "fore", "il", "im", "in", "inter",
       "ir", "mis", "non", "over", "pre", "re", "sub", "super", "trans", "un"},
      {"able", "al", "ation", "ed", "en", "er", "es", "est", "ful", "ible",
       "ic", "ing", "ion", "ious", "ish", "ist", "ity", "ive", "ization",
       "ize", "less", "ly", "ment", "ness", "or", "ous", "s", "sion", "tion",
       "ty", "ward", "y"});
}

AffixInventory AffixInventory::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open affix file: " + path);
  std::vector<std::string> prefixes, suffixes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    std::string context = path + ":" + std::to_string(line_no);
    if (tab == std::string::npos)
      throw DataError(context + ": expected 'prefix<TAB>affix' or 'suffix<TAB>affix'");
    std::string kind = line.substr(0, tab);
    std::string affix = line.substr(tab + 1);
    validate_affix(affix, context);
    if (kind == "prefix") {
      prefixes.push_back(affix);
    } else if (kind == "suffix") {
      suffixes.push_back(affix);
    } else {
      throw DataError(context + ": unknown affix kind '" + kind + "'");
    }
  }
  if (in.bad()) throw DataError("I/O error while reading " + path);
  return make(std::move(prefixes), std::move(suffixes));
}

void AffixInventory::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write affix file: " + path);
  out << "# affix inventory: one 'prefix<TAB>affix' or 'suffix<TAB>affix' per line\n";
  for (const auto& p : prefixes_) out << "prefix\t" << p << '\n';
  for (const auto& s : suffixes_) out << "suffix\t" << s << '\n';
  if (!out) throw DataError("I/O error while writing " + path);
}

std::optional<Segmentation> segment_word(const std::string& word, const Vocabulary& vocab,
                                         const AffixInventory& inventory,
                                         const SaaOptions& options) {
  if (word.empty()) return std::nullopt;
  if (vocab.contains(word) && vocab.freq(word) > options.threshold) return std::nullopt;

  auto stem_ok = [&](const std::string& stem) {
    return !stem.empty() && utf8_length(stem) >= options.min_stem_chars &&
           vocab.freq(stem) > 0;
  };

  Segmentation seg;
  seg.stem = word;

  for (const std::string& prefix : inventory.prefixes()) {
    if (prefix.size() >= word.size() || word.compare(0, prefix.size(), prefix) != 0) continue;
    std::string rest = word.substr(prefix.size());
    if (stem_ok(rest)) {
      seg.prefix = prefix;
      seg.stem = std::move(rest);
      break;
    }
  }

  const std::string& current = seg.stem;
  for (const std::string& suffix : inventory.suffixes()) {
    if (suffix.size() >= current.size()) continue;
    if (current.compare(current.size() - suffix.size(), suffix.size(), suffix) != 0) continue;
    std::string rest = current.substr(0, current.size() - suffix.size());
    if (stem_ok(rest)) {
      seg.suffix = suffix;
      seg.stem = std::move(rest);
      break;
    }
  }

  if (!seg.prefix && !seg.suffix) return std::nullopt;
  return seg;
}

Sentence render_segmentation(const Segmentation& seg) {
  Sentence tokens;
  if (seg.prefix) tokens.push_back(*seg.prefix + kSubwordMarker);
  tokens.push_back(seg.stem);
  if (seg.suffix) tokens.push_back(kSubwordMarker + *seg.suffix);
  return tokens;
}

SaaResult apply_saa(const Corpus& text, const Vocabulary& vocab,
                    const AffixInventory& inventory, const SaaOptions& options,
                    unsigned threads) {
  SaaResult result;
  result.corpus.side = text.side;
  result.corpus.sentences.resize(text.size());

  std::vector<std::set<std::string>> segmented_types(std::max<std::size_t>(threads, 1));
  std::vector<std::uint64_t> segmented_tokens(std::max<std::size_t>(threads, 1), 0);
  // Word-level results are cached per worker; segment_word is pure, so the
  // cache never changes the output, only the work done.
  std::vector<std::unordered_map<std::string, std::optional<Segmentation>>> caches(
      std::max<std::size_t>(threads, 1));

  parallel_for_index(text.size(), threads, [&](std::size_t i) {
    unsigned slot = threads <= 1 ? 0 : static_cast<unsigned>(i % threads);
    auto& cache = caches[slot];
    Sentence out;
    for (const std::string& token : text.sentences[i]) {
      auto it = cache.find(token);
      if (it == cache.end())
        it = cache.emplace(token, segment_word(token, vocab, inventory, options)).first;
      if (it->second) {
        Sentence rendered = render_segmentation(*it->second);
        out.insert(out.end(), rendered.begin(), rendered.end());
        segmented_types[slot].insert(token);
        ++segmented_tokens[slot];
      } else {
        out.push_back(token);
      }
    }
    result.corpus.sentences[i] = std::move(out);
  });

  std::set<std::string> all_types;
  for (auto& s : segmented_types) all_types.merge(s);
  result.report.types = all_types.size();
  for (std::uint64_t n : segmented_tokens) result.report.tokens += n;
  return result;
}

Corpus undo_saa(const Corpus& text) { return join_subword_markers(text); }

}  // namespace rarenmt
