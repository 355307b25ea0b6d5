#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "rarenmt/corpus.hpp"

namespace rarenmt {

struct BleuResult {
  double bleu = 0.0;  // percentage, 0..100
  std::array<double, 4> precisions{};  // fractions, 0..1
  double brevity_penalty = 1.0;
  std::uint64_t hyp_length = 0;
  std::uint64_t ref_length = 0;
  std::array<std::uint64_t, 4> matched{};
  std::array<std::uint64_t, 4> total{};

  // `BLEU = 31.42, 64.1/37.2/24.7/17.3 (BP=0.993, ratio=0.993, hyp_len=..., ref_len=...)`
  std::string to_line() const;
};

struct BleuOptions {
  // Add-one smoothing of the 2..4-gram precisions for tiny corpora.
  // Off by default, matching the usual corpus-level convention.
  bool smooth_add_one = false;
};

// Corpus-level BLEU over tokens as given: modified n-gram precision up to
// 4-grams, geometric mean, brevity penalty exp(1 - ref/hyp) for hyp <= ref.
// Any zero precision (unsmoothed) makes the score exactly 0.
BleuResult bleu(const Corpus& hypotheses, const Corpus& references,
                const BleuOptions& options = {});

// Removes `@@` subword markers before scoring. Throws DataError on a
// dangling marker.
Corpus strip_subword_markers(const Corpus& text);

}  // namespace rarenmt
