#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "rarenmt/corpus.hpp"
#include "rarenmt/error.hpp"
#include "rarenmt/nmt/model.hpp"
#include "rarenmt/vocabulary.hpp"

namespace rarenmt {

struct TrainingConfig {
  int layers = 2;
  int hidden = 512;
  int embedding = 512;
  OutputHead head = OutputHead::baseline;
  double learning_rate = 1e-3;
  double lr_floor = 1e-5;
  double grad_clip_norm = 5.0;
  int epochs = 16;
  int batch_size = 32;
  std::uint64_t seed = 1;

  // Small dimensions so the whole suite trains in seconds on a CPU core.
  static TrainingConfig desk() {
    TrainingConfig config;
    config.hidden = 64;
    config.embedding = 64;
    return config;
  }

  ModelConfig model_config() const {
    ModelConfig mc;
    mc.layers = layers;
    mc.hidden = hidden;
    mc.embedding = embedding;
    mc.attention_dim = hidden;
    mc.head = head;
    return mc;
  }
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;    // per-token cross-entropy
  double heldout_loss = 0.0;  // equals train_loss when no held-out set is given
  double learning_rate = 0.0;

  bool operator==(const EpochStats&) const = default;
};

// Writes the per-epoch TSV log: epoch, train loss, held-out loss, lr.
// Losses are printed with full precision so reruns can be diffed bytewise.
inline void write_training_log(const std::string& path, const std::vector<EpochStats>& history) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write training log: " + path);
  out << "epoch\ttrain_loss\theldout_loss\tlearning_rate\n";
  char line[160];
  for (const EpochStats& stats : history) {
    std::snprintf(line, sizeof line, "%d\t%.17g\t%.17g\t%.17g\n", stats.epoch, stats.train_loss,
                  stats.heldout_loss, stats.learning_rate);
    out << line;
  }
  if (!out) throw DataError("I/O error while writing " + path);
}

namespace train_detail {

// Hand-rolled Fisher-Yates so shuffles are identical across standard
// libraries for one seed.
inline void shuffle_indices(std::vector<std::size_t>& indices, std::uint64_t seed) {
  for (std::size_t i = indices.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(splitmix64(seed) % i);
    std::swap(indices[i - 1], indices[j]);
  }
}

template <class S>
struct IdPairs {
  std::vector<std::vector<int>> source, target;
};

template <class S>
IdPairs<S> to_ids(Model<S>& model, const ParallelCorpus& data) {
  IdPairs<S> pairs;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Sentence& src = data.source.sentences[i];
    const Sentence& tgt = data.target.sentences[i];
    if (src.empty() || tgt.empty()) {
      ++skipped;
      continue;
    }
    pairs.source.push_back(model.source_ids(src));
    pairs.target.push_back(model.target_ids(tgt));
  }
  if (skipped)
    std::cerr << "warning: skipped " << skipped << " pair(s) with an empty side\n";
  if (pairs.source.empty()) throw DataError("no usable sentence pairs for training");
  return pairs;
}

// Mean per-token cross-entropy over the given pairs, forward only.
template <class S>
double corpus_loss(Model<S>& model, const IdPairs<S>& pairs) {
  double total = 0.0;
  std::size_t tokens = 0;
  for (std::size_t i = 0; i < pairs.source.size(); ++i) {
    Tape<S> tape;
    std::size_t steps = 0;
    int loss = model.sentence_loss_graph(tape, pairs.source[i], pairs.target[i], &steps);
    total += static_cast<double>(tape.value(loss)(0, 0));
    tokens += steps;
  }
  return total / static_cast<double>(tokens);
}

}  // namespace train_detail

// Adam with bias correction, global-norm gradient clipping and held-out
// annealing: after an epoch whose held-out loss does not improve on the best
// seen, the learning rate halves (never below lr_floor).
template <class S>
std::vector<EpochStats> train(Model<S>& model, const ParallelCorpus& data,
                              const ParallelCorpus* heldout, const TrainingConfig& config) {
  using detail_pairs = train_detail::IdPairs<S>;
  detail_pairs pairs = train_detail::to_ids(model, data);
  detail_pairs heldout_pairs;
  if (heldout) heldout_pairs = train_detail::to_ids(model, *heldout);

  std::vector<Matrix<S>> adam_m(model.tensor_count()), adam_v(model.tensor_count());
  for (std::size_t i = 0; i < model.tensor_count(); ++i) {
    adam_m[i] = Matrix<S>::Zero(model.tensor_at(i).rows(), model.tensor_at(i).cols());
    adam_v[i] = Matrix<S>::Zero(model.tensor_at(i).rows(), model.tensor_at(i).cols());
  }
  const S beta1 = S(0.9), beta2 = S(0.999), adam_eps = S(1e-8);
  std::uint64_t adam_t = 0;

  std::vector<EpochStats> history;
  double lr = config.learning_rate;
  double best_heldout = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> order(pairs.source.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    train_detail::shuffle_indices(order, mix_seed(config.seed, "epoch." + std::to_string(epoch)));

    double epoch_loss_sum = 0.0;
    std::size_t epoch_tokens = 0;

    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
      std::size_t end = std::min(order.size(), begin + config.batch_size);

      // Two passes: token count first so every sentence backward can be
      // seeded with 1/batch_tokens and the batch loss is a per-token mean.
      std::size_t batch_tokens = 0;
      for (std::size_t k = begin; k < end; ++k)
        batch_tokens += pairs.target[order[k]].size() + 1;

      model.zero_grads();
      double batch_loss_sum = 0.0;
      for (std::size_t k = begin; k < end; ++k) {
        Tape<S> tape;
        std::size_t steps = 0;
        int loss =
            model.sentence_loss_graph(tape, pairs.source[order[k]], pairs.target[order[k]], &steps);
        batch_loss_sum += static_cast<double>(tape.value(loss)(0, 0));
        tape.backward(loss, S(1) / static_cast<S>(batch_tokens));
      }
      if (!std::isfinite(batch_loss_sum))
        throw NumericError("training diverged: non-finite loss at epoch " +
                           std::to_string(epoch));

      // Global-norm clipping.
      if (config.grad_clip_norm > 0) {
        S sq = S(0);
        for (std::size_t i = 0; i < model.tensor_count(); ++i)
          sq += model.tensor_at(i).grad.squaredNorm();
        S norm = std::sqrt(sq);
        if (norm > S(config.grad_clip_norm)) {
          S factor = S(config.grad_clip_norm) / norm;
          for (std::size_t i = 0; i < model.tensor_count(); ++i)
            model.tensor_at(i).grad *= factor;
        }
      }

      ++adam_t;
      S correction1 = S(1) - std::pow(beta1, S(adam_t));
      S correction2 = S(1) - std::pow(beta2, S(adam_t));
      for (std::size_t i = 0; i < model.tensor_count(); ++i) {
        Tensor<S>& tensor = model.tensor_at(i);
        adam_m[i] = beta1 * adam_m[i] + (S(1) - beta1) * tensor.grad;
        adam_v[i].array() =
            beta2 * adam_v[i].array() + (S(1) - beta2) * tensor.grad.array().square();
        tensor.value.array() -= S(lr) * (adam_m[i].array() / correction1) /
                                ((adam_v[i].array() / correction2).sqrt() + adam_eps);
      }
      if (!model.all_finite())
        throw NumericError("training diverged: non-finite parameters at epoch " +
                           std::to_string(epoch));

      epoch_loss_sum += batch_loss_sum;
      epoch_tokens += batch_tokens;
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = epoch_loss_sum / static_cast<double>(epoch_tokens);
    stats.heldout_loss =
        heldout ? train_detail::corpus_loss(model, heldout_pairs) : stats.train_loss;
    stats.learning_rate = lr;
    history.push_back(stats);

    if (stats.heldout_loss >= best_heldout)
      lr = std::max(lr / 2.0, config.lr_floor);
    best_heldout = std::min(best_heldout, stats.heldout_loss);
  }
  return history;
}

// Builds vocabularies (if needed), constructs the model and trains it.
template <class S = double>
struct TrainedModel {
  Model<S> model;
  std::vector<EpochStats> history;
};

template <class S = double>
TrainedModel<S> train_model(const ParallelCorpus& data, const ParallelCorpus* heldout,
                            const Vocabulary& source_vocab, const Vocabulary& target_vocab,
                            const TrainingConfig& config) {
  Model<S> model(config.model_config(), source_vocab, target_vocab, config.seed);
  std::vector<EpochStats> history = train(model, data, heldout, config);
  return {std::move(model), std::move(history)};
}

struct GradientCheckReport {
  double max_relative_error = 0.0;
  std::string worst_tensor;
  Eigen::Index worst_row = 0;
  Eigen::Index worst_col = 0;
};

// Central finite differences against the analytic gradients for every
// parameter element. Meant for small dimensions; the relative error is
// guarded by `denominator_floor` so that finite-difference noise on
// near-zero gradients does not dominate.
template <class S>
GradientCheckReport gradient_check(Model<S>& model, const ParallelCorpus& batch,
                                   S step = S(1e-4), S denominator_floor = S(1e-6)) {
  train_detail::IdPairs<S> pairs = train_detail::to_ids(model, batch);
  std::size_t total_tokens = 0;
  for (const auto& target : pairs.target) total_tokens += target.size() + 1;

  model.zero_grads();
  for (std::size_t i = 0; i < pairs.source.size(); ++i) {
    Tape<S> tape;
    int loss = model.sentence_loss_graph(tape, pairs.source[i], pairs.target[i], nullptr);
    tape.backward(loss, S(1) / static_cast<S>(total_tokens));
  }
  std::vector<Matrix<S>> analytic(model.tensor_count());
  for (std::size_t i = 0; i < model.tensor_count(); ++i) analytic[i] = model.tensor_at(i).grad;

  auto loss_value = [&]() -> S {
    S total = S(0);
    for (std::size_t i = 0; i < pairs.source.size(); ++i) {
      Tape<S> tape;
      int loss = model.sentence_loss_graph(tape, pairs.source[i], pairs.target[i], nullptr);
      total += tape.value(loss)(0, 0);
    }
    return total / static_cast<S>(total_tokens);
  };

  GradientCheckReport report;
  for (std::size_t i = 0; i < model.tensor_count(); ++i) {
    Tensor<S>& tensor = model.tensor_at(i);
    for (Eigen::Index c = 0; c < tensor.cols(); ++c) {
      for (Eigen::Index r = 0; r < tensor.rows(); ++r) {
        S saved = tensor.value(r, c);
        tensor.value(r, c) = saved + step;
        S plus = loss_value();
        tensor.value(r, c) = saved - step;
        S minus = loss_value();
        tensor.value(r, c) = saved;

        S numeric = (plus - minus) / (S(2) * step);
        S a = analytic[i](r, c);
        S denom = std::max({std::abs(a), std::abs(numeric), denominator_floor});
        double rel = static_cast<double>(std::abs(a - numeric) / denom);
        if (rel > report.max_relative_error) {
          report.max_relative_error = rel;
          report.worst_tensor = tensor.name;
          report.worst_row = r;
          report.worst_col = c;
        }
      }
    }
  }
  return report;
}

}  // namespace rarenmt
