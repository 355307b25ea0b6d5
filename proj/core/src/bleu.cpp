#include "rarenmt/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "rarenmt/error.hpp"
#include "rarenmt/subword.hpp"

namespace rarenmt {

namespace {

// N-grams keyed by tokens joined with an unprintable separator.
void count_ngrams(const Sentence& sentence, std::size_t n,
                  std::unordered_map<std::string, std::uint64_t>& out) {
  if (sentence.size() < n) return;
  for (std::size_t i = 0; i + n <= sentence.size(); ++i) {
    std::string key = sentence[i];
    for (std::size_t k = 1; k < n; ++k) {
      key += '\x1F';
      key += sentence[i + k];
    }
    ++out[key];
  }
}

}  // namespace

BleuResult bleu(const Corpus& hypotheses, const Corpus& references, const BleuOptions& options) {
  if (hypotheses.size() != references.size())
    throw DataError("bleu: hypothesis and reference sentence counts differ (" +
                    std::to_string(hypotheses.size()) + " vs " +
                    std::to_string(references.size()) + ")");
  if (hypotheses.size() == 0) throw DataError("bleu: empty corpus");

  BleuResult result;
  std::unordered_map<std::string, std::uint64_t> hyp_ngrams, ref_ngrams;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    const Sentence& hyp = hypotheses.sentences[i];
    const Sentence& ref = references.sentences[i];
    result.hyp_length += hyp.size();
    result.ref_length += ref.size();
    for (std::size_t n = 1; n <= 4; ++n) {
      hyp_ngrams.clear();
      ref_ngrams.clear();
      count_ngrams(hyp, n, hyp_ngrams);
      count_ngrams(ref, n, ref_ngrams);
      for (const auto& [key, count] : hyp_ngrams) {
        result.total[n - 1] += count;
        auto it = ref_ngrams.find(key);
        if (it != ref_ngrams.end()) result.matched[n - 1] += std::min(count, it->second);
      }
    }
  }

  double log_sum = 0.0;
  bool zero_precision = false;
  for (std::size_t n = 0; n < 4; ++n) {
    std::uint64_t matched = result.matched[n];
    std::uint64_t total = result.total[n];
    if (options.smooth_add_one && n > 0) {
      ++matched;
      ++total;
    }
    result.precisions[n] = total ? static_cast<double>(matched) / static_cast<double>(total) : 0.0;
    if (result.precisions[n] > 0.0) {
      log_sum += std::log(result.precisions[n]);
    } else {
      zero_precision = true;
    }
  }

  if (result.hyp_length == 0) {
    result.brevity_penalty = 0.0;
  } else if (result.hyp_length > result.ref_length) {
    result.brevity_penalty = 1.0;
  } else {
    result.brevity_penalty =
        std::exp(1.0 - static_cast<double>(result.ref_length) / static_cast<double>(result.hyp_length));
  }

  result.bleu = zero_precision || result.hyp_length == 0
                    ? 0.0
                    : result.brevity_penalty * std::exp(log_sum / 4.0) * 100.0;
  return result;
}

std::string BleuResult::to_line() const {
  double ratio = ref_length ? static_cast<double>(hyp_length) / static_cast<double>(ref_length) : 0.0;
  char buffer[256];
  std::snprintf(buffer, sizeof(buffer),
                "BLEU = %.2f, %.1f/%.1f/%.1f/%.1f "
                "(BP=%.3f, ratio=%.3f, hyp_len=%llu, ref_len=%llu)",
                bleu, precisions[0] * 100.0, precisions[1] * 100.0, precisions[2] * 100.0,
                precisions[3] * 100.0, brevity_penalty, ratio,
                static_cast<unsigned long long>(hyp_length),
                static_cast<unsigned long long>(ref_length));
  return buffer;
}

Corpus strip_subword_markers(const Corpus& text) { return join_subword_markers(text); }

}  // namespace rarenmt
