#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "rarenmt/error.hpp"
#include "rarenmt/lsw.hpp"
#include "rarenmt/nmt/model.hpp"

namespace rarenmt {

struct TranslateOptions {
  int beam_size = 1;       // 1 = greedy
  int max_len_factor = 3;  // decode at most 3x the source length
};

struct Translation {
  Sentence tokens;
  double score = 0.0;  // total log-probability of the emitted tokens
  std::size_t scored_tokens = 0;
  bool reached_eos = false;

  double normalized_score() const {
    return scored_tokens ? score / static_cast<double>(scored_tokens) : score;
  }
};

// Beam search over cumulative log-probability. Hypotheses finish on the
// sentence-end token; the best finished hypothesis wins, falling back to the
// best live one when nothing finished within the length cap.
template <class S>
Translation translate(Model<S>& model, const Sentence& source, const TranslateOptions& options = {}) {
  if (source.empty()) throw DataError("cannot translate an empty sentence");
  if (options.beam_size < 1) throw UsageError("beam size must be >= 1");

  EncoderStates<S> enc = model.encode(source);
  const int beam = options.beam_size;
  const std::size_t max_len =
      static_cast<std::size_t>(options.max_len_factor) * source.size();

  struct Hyp {
    std::vector<int> tokens;
    double logprob = 0.0;
    DecoderState<S> state;
  };

  std::vector<Hyp> live;
  live.push_back({{}, 0.0, model.initial_state()});
  std::vector<Hyp> finished;

  for (std::size_t step = 0; step < max_len && !live.empty(); ++step) {
    struct Candidate {
      std::size_t hyp;
      int token;
      double logprob;
    };
    std::vector<Candidate> candidates;
    std::vector<DecoderState<S>> next_states(live.size());

    for (std::size_t h = 0; h < live.size(); ++h) {
      int y_prev = live[h].tokens.empty() ? Vocabulary::kBosId : live[h].tokens.back();
      DecodeStepResult<S> result = model.decode_step(y_prev, live[h].state, enc);
      next_states[h] = std::move(result.state);

      // Per hypothesis only the top `beam` tokens can make the global cut.
      std::vector<int> order(result.log_probs.rows());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
      std::size_t keep = std::min<std::size_t>(beam, order.size());
      std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                        [&](int a, int b) {
                          double pa = static_cast<double>(result.log_probs(a, 0));
                          double pb = static_cast<double>(result.log_probs(b, 0));
                          if (pa != pb) return pa > pb;
                          return a < b;
                        });
      for (std::size_t i = 0; i < keep; ++i)
        candidates.push_back(
            {h, order[i],
             live[h].logprob + static_cast<double>(result.log_probs(order[i], 0))});
    }

    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.logprob != b.logprob) return a.logprob > b.logprob;
      if (a.token != b.token) return a.token < b.token;
      return a.hyp < b.hyp;
    });
    if (candidates.size() > static_cast<std::size_t>(beam)) candidates.resize(beam);

    std::vector<Hyp> next_live;
    for (const Candidate& candidate : candidates) {
      Hyp hyp;
      hyp.tokens = live[candidate.hyp].tokens;
      hyp.tokens.push_back(candidate.token);
      hyp.logprob = candidate.logprob;
      if (candidate.token == Vocabulary::kEosId) {
        finished.push_back(std::move(hyp));
      } else {
        hyp.state = next_states[candidate.hyp];
        next_live.push_back(std::move(hyp));
      }
    }
    live = std::move(next_live);

    // Live scores only decrease, so once the best finished hypothesis beats
    // every live one the search cannot improve.
    if (!finished.empty() && !live.empty()) {
      double best_finished = finished.front().logprob;
      for (const Hyp& hyp : finished) best_finished = std::max(best_finished, hyp.logprob);
      double best_live = live.front().logprob;
      for (const Hyp& hyp : live) best_live = std::max(best_live, hyp.logprob);
      if (best_finished >= best_live) break;
    }
  }

  const std::vector<Hyp>& pool = finished.empty() ? live : finished;
  const Hyp* best = &pool.front();
  for (const Hyp& hyp : pool)
    if (hyp.logprob > best->logprob) best = &hyp;

  Translation translation;
  translation.score = best->logprob;
  translation.reached_eos = !finished.empty();
  translation.scored_tokens = best->tokens.size();
  for (int token : best->tokens)
    if (token != Vocabulary::kEosId)
      translation.tokens.push_back(model.target_vocab().word_for(token));
  return translation;
}

template <class S>
struct VariantChoice {
  std::size_t variant_index = 0;
  Translation translation;
};

// Translates every variant and keeps the one whose translation has the
// highest length-normalized log-probability; ties keep the earliest variant.
template <class S>
VariantChoice<S> select_best_variant(Model<S>& model, const SentenceVariants& variants,
                                     const TranslateOptions& options = {}) {
  if (variants.variants.empty()) throw UsageError("variant set must contain >= 1 sentence");
  VariantChoice<S> best;
  bool first = true;
  for (std::size_t i = 0; i < variants.variants.size(); ++i) {
    Translation candidate = translate(model, variants.variants[i], options);
    if (first || candidate.normalized_score() > best.translation.normalized_score()) {
      best.variant_index = i;
      best.translation = std::move(candidate);
      first = false;
    }
  }
  return best;
}

}  // namespace rarenmt
