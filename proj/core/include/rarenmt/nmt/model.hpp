#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rarenmt/corpus.hpp"
#include "rarenmt/error.hpp"
#include "rarenmt/nmt/tape.hpp"
#include "rarenmt/nmt/tensor.hpp"
#include "rarenmt/vocabulary.hpp"

namespace rarenmt {

enum class OutputHead { baseline, ffnn_residual, simplified };

const char* head_name(OutputHead head);
OutputHead head_from_name(std::string_view name);

struct ModelConfig {
  int layers = 2;
  int hidden = 512;      // per-direction encoder size, decoder size and
                         // attentional-state size
  int embedding = 512;
  int attention_dim = 512;
  OutputHead head = OutputHead::baseline;

  void validate() const {
    if (layers < 1 || hidden < 1 || embedding < 1 || attention_dim < 1)
      throw UsageError("model dimensions must be positive");
    if (head == OutputHead::simplified && embedding != hidden)
      throw UsageError(
          "the simplified output head adds source-embedding averages to the "
          "attentional state, so the embedding size must equal the hidden size");
  }
};

// Deterministic per-tensor init stream: the same (seed, tensor name) always
// produces the same values, independent of registration order and platform.
std::uint64_t mix_seed(std::uint64_t seed, std::string_view name);
std::uint64_t splitmix64(std::uint64_t& state);
double uniform_unit(std::uint64_t& state);  // [0, 1)

template <class S>
struct EncoderStates {
  Matrix<S> annotations;  // 2*hidden x n, forward and backward states stacked
  Matrix<S> embeddings;   // embedding x n, retained for the attention-side average
  Eigen::Index length() const { return annotations.cols(); }
};

template <class S>
struct AttentionResult {
  Matrix<S> alignment;   // n x 1, sums to 1
  Matrix<S> context;     // 2*hidden x 1
  Matrix<S> source_avg;  // embedding x 1, tanh of the alignment-weighted embeddings
};

template <class S>
struct DecoderState {
  std::vector<Matrix<S>> layer_h, layer_c;
  Matrix<S> attentional;  // the state fed back through input feeding
};

template <class S>
struct DecodeStepResult {
  AttentionResult<S> attention;
  DecoderState<S> state;
  Matrix<S> log_probs;  // |V_tgt| x 1
};

// Bidirectional LSTM encoder + input-feeding LSTM decoder with additive
// attention and a selectable output head:
//   baseline    softmax(W z + b)
//   ffnn        softmax(W z + b + W_t t + b_t),  t = tanh(W_l l) + l
//   simplified  softmax(W (z + l) + b)
// where l is the alignment-weighted, tanh-squashed source embedding average.
template <class S = double>
class Model {
 public:
  Model(const ModelConfig& config, Vocabulary source_vocab, Vocabulary target_vocab,
        std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  const Vocabulary& source_vocab() const { return source_vocab_; }
  const Vocabulary& target_vocab() const { return target_vocab_; }

  // ---- parameter registry ----
  std::size_t tensor_count() const { return tensors_.size(); }
  Tensor<S>& tensor_at(std::size_t i) { return *tensors_[i]; }
  Tensor<S>& tensor(const std::string& name);
  bool has_tensor(const std::string& name) const { return index_.count(name) > 0; }
  std::size_t param_count() const;
  void zero_grads();
  bool all_finite() const;

  // ---- graph building (shared by training and inference) ----
  struct EncoderGraph {
    int H = -1;    // 2h x n annotation matrix
    int F = -1;    // e x n source embeddings
    int UaH = -1;  // attention projection of H, cached per sentence
    Eigen::Index n = 0;
  };
  struct AttentionGraph {
    int alignment = -1, context = -1, source_avg = -1;
  };
  struct StateGraph {
    std::vector<std::pair<int, int>> layer_hc;
    int attentional = -1;
  };
  struct StepGraph {
    AttentionGraph attention;
    StateGraph state;
    int logits = -1;
  };

  EncoderGraph encode_graph(Tape<S>& tape, const std::vector<int>& source_ids);
  AttentionGraph attention_graph(Tape<S>& tape, int z_prev, const EncoderGraph& enc);
  StateGraph initial_state_graph(Tape<S>& tape);
  StepGraph decode_step_graph(Tape<S>& tape, int y_prev, const StateGraph& state,
                              const EncoderGraph& enc);

  // Sum of per-step cross-entropies for teacher-forced decoding of the pair;
  // steps_out receives the number of predicted tokens (|target| + 1).
  int sentence_loss_graph(Tape<S>& tape, const std::vector<int>& source_ids,
                          const std::vector<int>& target_ids, std::size_t* steps_out);

  // ---- value-level API ----
  std::vector<int> source_ids(const Sentence& sentence) const;
  std::vector<int> target_ids(const Sentence& sentence) const;

  EncoderStates<S> encode(const Sentence& sentence);
  EncoderStates<S> encode_ids(const std::vector<int>& source_ids);
  AttentionResult<S> attention(const Matrix<S>& z_prev, const EncoderStates<S>& enc);
  DecoderState<S> initial_state() const;
  DecodeStepResult<S> decode_step(int y_prev, const DecoderState<S>& state,
                                  const EncoderStates<S>& enc);

  // ---- checkpoint ----
  void save(const std::string& path) const;
  static Model load(const std::string& path);

 private:
  ModelConfig config_;
  Vocabulary source_vocab_, target_vocab_;
  std::vector<std::unique_ptr<Tensor<S>>> tensors_;
  std::unordered_map<std::string, std::size_t> index_;

  Tensor<S>& add_tensor(const std::string& name, Eigen::Index rows, Eigen::Index cols);
  void build_tensors();
  void init_tensors(std::uint64_t seed);

  std::pair<int, int> lstm_step_graph(Tape<S>& tape, Tensor<S>& W, Tensor<S>& U, Tensor<S>& b,
                                      int x, int h_prev, int c_prev);
  int head_logits_graph(Tape<S>& tape, int z, int source_avg);

  EncoderGraph encoder_constants(Tape<S>& tape, const EncoderStates<S>& enc);
  StateGraph state_constants(Tape<S>& tape, const DecoderState<S>& state);
};

template <class S>
Matrix<S> log_softmax(const Matrix<S>& logits);

// ---------------------------------------------------------------------------
// implementation

inline const char* head_name(OutputHead head) {
  switch (head) {
    case OutputHead::baseline: return "baseline";
    case OutputHead::ffnn_residual: return "ffnn";
    case OutputHead::simplified: return "simplified";
  }
  return "baseline";
}

inline OutputHead head_from_name(std::string_view name) {
  if (name == "baseline") return OutputHead::baseline;
  if (name == "ffnn" || name == "ffnn_residual") return OutputHead::ffnn_residual;
  if (name == "simplified") return OutputHead::simplified;
  throw UsageError("unknown output head: " + std::string(name));
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::string_view name) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ull;
  }
  h ^= seed + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  return h;
}

inline double uniform_unit(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * (1.0 / 9007199254740992.0);
}

template <class S>
Model<S>::Model(const ModelConfig& config, Vocabulary source_vocab, Vocabulary target_vocab,
                std::uint64_t seed)
    : config_(config),
      source_vocab_(std::move(source_vocab)),
      target_vocab_(std::move(target_vocab)) {
  config_.validate();
  build_tensors();
  init_tensors(seed);
}

template <class S>
Tensor<S>& Model<S>::add_tensor(const std::string& name, Eigen::Index rows, Eigen::Index cols) {
  tensors_.push_back(std::make_unique<Tensor<S>>(name, rows, cols));
  index_.emplace(name, tensors_.size() - 1);
  return *tensors_.back();
}

template <class S>
void Model<S>::build_tensors() {
  const Eigen::Index h = config_.hidden;
  const Eigen::Index e = config_.embedding;
  const Eigen::Index a = config_.attention_dim;
  const Eigen::Index vs = static_cast<Eigen::Index>(source_vocab_.size());
  const Eigen::Index vt = static_cast<Eigen::Index>(target_vocab_.size());

  add_tensor("src_embed", e, vs);
  add_tensor("tgt_embed", e, vt);
  for (int l = 1; l <= config_.layers; ++l) {
    Eigen::Index in = l == 1 ? e : 2 * h;
    for (const char* dir : {"fwd", "bwd"}) {
      std::string base = "enc.l" + std::to_string(l) + "." + dir;
      add_tensor(base + ".W", 4 * h, in);
      add_tensor(base + ".U", 4 * h, h);
      add_tensor(base + ".b", 4 * h, 1);
    }
  }
  for (int l = 1; l <= config_.layers; ++l) {
    Eigen::Index in = l == 1 ? e + h : h;
    std::string base = "dec.l" + std::to_string(l);
    add_tensor(base + ".W", 4 * h, in);
    add_tensor(base + ".U", 4 * h, h);
    add_tensor(base + ".b", 4 * h, 1);
  }
  add_tensor("att.W", a, h);
  add_tensor("att.U", a, 2 * h);
  add_tensor("att.v", a, 1);
  add_tensor("att.b", a, 1);
  add_tensor("comb.W", h, 3 * h);
  add_tensor("comb.b", h, 1);
  add_tensor("out.W", vt, h);
  add_tensor("out.b", vt, 1);
  if (config_.head == OutputHead::ffnn_residual) {
    add_tensor("aug.Wl", e, e);
    add_tensor("aug.Wt", vt, e);
    add_tensor("aug.bt", vt, 1);
  }
}

template <class S>
void Model<S>::init_tensors(std::uint64_t seed) {
  for (auto& tensor : tensors_) {
    std::uint64_t state = mix_seed(seed, tensor->name);
    for (Eigen::Index c = 0; c < tensor->cols(); ++c)
      for (Eigen::Index r = 0; r < tensor->rows(); ++r)
        tensor->value(r, c) = static_cast<S>(0.2 * uniform_unit(state) - 0.1);
    // LSTM forget-gate biases start at 1 (gates are packed [i f g o]).
    if (tensor->name.size() > 2 && tensor->name.compare(tensor->name.size() - 2, 2, ".b") == 0 &&
        (tensor->name.rfind("enc.", 0) == 0 || tensor->name.rfind("dec.", 0) == 0)) {
      Eigen::Index h = tensor->rows() / 4;
      tensor->value.middleRows(h, h).array() += S(1);
    }
  }
}

template <class S>
Tensor<S>& Model<S>::tensor(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw UsageError("unknown tensor: " + name);
  return *tensors_[it->second];
}

template <class S>
std::size_t Model<S>::param_count() const {
  std::size_t total = 0;
  for (const auto& tensor : tensors_) total += static_cast<std::size_t>(tensor->size());
  return total;
}

template <class S>
void Model<S>::zero_grads() {
  for (auto& tensor : tensors_) tensor->zero_grad();
}

template <class S>
bool Model<S>::all_finite() const {
  for (const auto& tensor : tensors_)
    if (!tensor->value.allFinite()) return false;
  return true;
}

template <class S>
std::pair<int, int> Model<S>::lstm_step_graph(Tape<S>& tape, Tensor<S>& W, Tensor<S>& U,
                                              Tensor<S>& b, int x, int h_prev, int c_prev) {
  const Eigen::Index h = config_.hidden;
  int pre = tape.add(tape.add(tape.matmul(tape.leaf(W), x), tape.matmul(tape.leaf(U), h_prev)),
                     tape.leaf(b));
  int i = tape.sigmoid(tape.slice_rows(pre, 0, h));
  int f = tape.sigmoid(tape.slice_rows(pre, h, h));
  int g = tape.tanh(tape.slice_rows(pre, 2 * h, h));
  int o = tape.sigmoid(tape.slice_rows(pre, 3 * h, h));
  int c = tape.add(tape.cmul(f, c_prev), tape.cmul(i, g));
  int hh = tape.cmul(o, tape.tanh(c));
  return {hh, c};
}

template <class S>
typename Model<S>::EncoderGraph Model<S>::encode_graph(Tape<S>& tape,
                                                       const std::vector<int>& source_ids) {
  if (source_ids.empty()) throw DataError("cannot encode an empty sentence");
  const Eigen::Index h = config_.hidden;
  const std::size_t n = source_ids.size();

  EncoderGraph enc;
  enc.n = static_cast<Eigen::Index>(n);
  enc.F = tape.embed_cols(tensor("src_embed"), source_ids);

  std::vector<int> inputs(n);
  for (std::size_t i = 0; i < n; ++i) inputs[i] = tape.col(enc.F, static_cast<Eigen::Index>(i));

  for (int l = 1; l <= config_.layers; ++l) {
    std::string base = "enc.l" + std::to_string(l);
    Tensor<S>&fW = tensor(base + ".fwd.W"), &fU = tensor(base + ".fwd.U"),
             &fb = tensor(base + ".fwd.b");
    Tensor<S>&bW = tensor(base + ".bwd.W"), &bU = tensor(base + ".bwd.U"),
             &bb = tensor(base + ".bwd.b");
    std::vector<int> fwd(n), bwd(n);
    int hs = tape.constant(Matrix<S>::Zero(h, 1));
    int cs = tape.constant(Matrix<S>::Zero(h, 1));
    for (std::size_t i = 0; i < n; ++i) {
      std::tie(hs, cs) = lstm_step_graph(tape, fW, fU, fb, inputs[i], hs, cs);
      fwd[i] = hs;
    }
    hs = tape.constant(Matrix<S>::Zero(h, 1));
    cs = tape.constant(Matrix<S>::Zero(h, 1));
    for (std::size_t i = n; i-- > 0;) {
      std::tie(hs, cs) = lstm_step_graph(tape, bW, bU, bb, inputs[i], hs, cs);
      bwd[i] = hs;
    }
    for (std::size_t i = 0; i < n; ++i) inputs[i] = tape.concat_rows(fwd[i], bwd[i]);
  }

  enc.H = tape.hstack(inputs);
  enc.UaH = tape.matmul(tape.leaf(tensor("att.U")), enc.H);
  return enc;
}

template <class S>
typename Model<S>::AttentionGraph Model<S>::attention_graph(Tape<S>& tape, int z_prev,
                                                            const EncoderGraph& enc) {
  AttentionGraph att;
  int query = tape.add(tape.matmul(tape.leaf(tensor("att.W")), z_prev), tape.leaf(tensor("att.b")));
  int scores = tape.matTvec(tape.tanh(tape.broadcast_add_col(enc.UaH, query)),
                            tape.leaf(tensor("att.v")));
  att.alignment = tape.softmax_vec(scores);
  att.context = tape.matmul(enc.H, att.alignment);
  // The same weights average the raw source embeddings.
  att.source_avg = tape.tanh(tape.matmul(enc.F, att.alignment));
  return att;
}

template <class S>
typename Model<S>::StateGraph Model<S>::initial_state_graph(Tape<S>& tape) {
  const Eigen::Index h = config_.hidden;
  StateGraph state;
  for (int l = 0; l < config_.layers; ++l)
    state.layer_hc.emplace_back(tape.constant(Matrix<S>::Zero(h, 1)),
                                tape.constant(Matrix<S>::Zero(h, 1)));
  state.attentional = tape.constant(Matrix<S>::Zero(h, 1));
  return state;
}

template <class S>
typename Model<S>::StepGraph Model<S>::decode_step_graph(Tape<S>& tape, int y_prev,
                                                         const StateGraph& state,
                                                         const EncoderGraph& enc) {
  StepGraph step;
  step.attention = attention_graph(tape, state.attentional, enc);

  int y_emb = tape.embed_cols(tensor("tgt_embed"), {y_prev});
  int x = tape.concat_rows(y_emb, state.attentional);  // input feeding
  step.state.layer_hc.resize(config_.layers);
  for (int l = 1; l <= config_.layers; ++l) {
    std::string base = "dec.l" + std::to_string(l);
    auto [hh, cc] = lstm_step_graph(tape, tensor(base + ".W"), tensor(base + ".U"),
                                    tensor(base + ".b"), x, state.layer_hc[l - 1].first,
                                    state.layer_hc[l - 1].second);
    step.state.layer_hc[l - 1] = {hh, cc};
    x = hh;
  }

  int combined = tape.concat_rows(x, step.attention.context);
  step.state.attentional = tape.tanh(
      tape.add(tape.matmul(tape.leaf(tensor("comb.W")), combined), tape.leaf(tensor("comb.b"))));
  step.logits = head_logits_graph(tape, step.state.attentional, step.attention.source_avg);
  return step;
}

template <class S>
int Model<S>::head_logits_graph(Tape<S>& tape, int z, int source_avg) {
  switch (config_.head) {
    case OutputHead::baseline:
      return tape.add(tape.matmul(tape.leaf(tensor("out.W")), z), tape.leaf(tensor("out.b")));
    case OutputHead::simplified:
      return tape.add(tape.matmul(tape.leaf(tensor("out.W")), tape.add(z, source_avg)),
                      tape.leaf(tensor("out.b")));
    case OutputHead::ffnn_residual: {
      int base = tape.add(tape.matmul(tape.leaf(tensor("out.W")), z), tape.leaf(tensor("out.b")));
      int t = tape.add(tape.tanh(tape.matmul(tape.leaf(tensor("aug.Wl")), source_avg)),
                       source_avg);
      return tape.add(base, tape.add(tape.matmul(tape.leaf(tensor("aug.Wt")), t),
                                     tape.leaf(tensor("aug.bt"))));
    }
  }
  throw UsageError("invalid output head");
}

template <class S>
int Model<S>::sentence_loss_graph(Tape<S>& tape, const std::vector<int>& source_ids,
                                  const std::vector<int>& target_ids, std::size_t* steps_out) {
  EncoderGraph enc = encode_graph(tape, source_ids);
  StateGraph state = initial_state_graph(tape);

  std::vector<int> inputs, outputs;
  inputs.push_back(Vocabulary::kBosId);
  inputs.insert(inputs.end(), target_ids.begin(), target_ids.end());
  outputs = target_ids;
  outputs.push_back(Vocabulary::kEosId);

  int total = -1;
  for (std::size_t j = 0; j < outputs.size(); ++j) {
    StepGraph step = decode_step_graph(tape, inputs[j], state, enc);
    state = step.state;
    int loss = tape.cross_entropy(step.logits, outputs[j]);
    total = total < 0 ? loss : tape.add(total, loss);
  }
  if (steps_out) *steps_out = outputs.size();
  return total;
}

template <class S>
std::vector<int> Model<S>::source_ids(const Sentence& sentence) const {
  std::vector<int> ids;
  ids.reserve(sentence.size());
  for (const std::string& token : sentence) ids.push_back(source_vocab_.id(token));
  return ids;
}

template <class S>
std::vector<int> Model<S>::target_ids(const Sentence& sentence) const {
  std::vector<int> ids;
  ids.reserve(sentence.size());
  for (const std::string& token : sentence) ids.push_back(target_vocab_.id(token));
  return ids;
}

template <class S>
EncoderStates<S> Model<S>::encode(const Sentence& sentence) {
  return encode_ids(source_ids(sentence));
}

template <class S>
EncoderStates<S> Model<S>::encode_ids(const std::vector<int>& source_ids) {
  Tape<S> tape;
  EncoderGraph enc = encode_graph(tape, source_ids);
  EncoderStates<S> states;
  states.annotations = tape.value(enc.H);
  states.embeddings = tape.value(enc.F);
  return states;
}

template <class S>
typename Model<S>::EncoderGraph Model<S>::encoder_constants(Tape<S>& tape,
                                                            const EncoderStates<S>& enc) {
  EncoderGraph graph;
  graph.n = enc.length();
  graph.H = tape.constant(enc.annotations);
  graph.F = tape.constant(enc.embeddings);
  graph.UaH = tape.matmul(tape.leaf(tensor("att.U")), graph.H);
  return graph;
}

template <class S>
typename Model<S>::StateGraph Model<S>::state_constants(Tape<S>& tape,
                                                        const DecoderState<S>& state) {
  StateGraph graph;
  for (std::size_t l = 0; l < state.layer_h.size(); ++l)
    graph.layer_hc.emplace_back(tape.constant(state.layer_h[l]), tape.constant(state.layer_c[l]));
  graph.attentional = tape.constant(state.attentional);
  return graph;
}

template <class S>
AttentionResult<S> Model<S>::attention(const Matrix<S>& z_prev, const EncoderStates<S>& enc) {
  Tape<S> tape;
  EncoderGraph graph = encoder_constants(tape, enc);
  AttentionGraph att = attention_graph(tape, tape.constant(z_prev), graph);
  return {tape.value(att.alignment), tape.value(att.context), tape.value(att.source_avg)};
}

template <class S>
DecoderState<S> Model<S>::initial_state() const {
  DecoderState<S> state;
  const Eigen::Index h = config_.hidden;
  for (int l = 0; l < config_.layers; ++l) {
    state.layer_h.push_back(Matrix<S>::Zero(h, 1));
    state.layer_c.push_back(Matrix<S>::Zero(h, 1));
  }
  state.attentional = Matrix<S>::Zero(h, 1);
  return state;
}

template <class S>
DecodeStepResult<S> Model<S>::decode_step(int y_prev, const DecoderState<S>& state,
                                          const EncoderStates<S>& enc) {
  Tape<S> tape;
  EncoderGraph graph = encoder_constants(tape, enc);
  StateGraph state_graph = state_constants(tape, state);
  StepGraph step = decode_step_graph(tape, y_prev, state_graph, graph);

  DecodeStepResult<S> result;
  result.attention = {tape.value(step.attention.alignment), tape.value(step.attention.context),
                      tape.value(step.attention.source_avg)};
  for (auto [hh, cc] : step.state.layer_hc) {
    result.state.layer_h.push_back(tape.value(hh));
    result.state.layer_c.push_back(tape.value(cc));
  }
  result.state.attentional = tape.value(step.state.attentional);
  result.log_probs = log_softmax(tape.value(step.logits));
  return result;
}

template <class S>
Matrix<S> log_softmax(const Matrix<S>& logits) {
  S max = logits.maxCoeff();
  S lse = max + std::log((logits.array() - max).exp().sum());
  return (logits.array() - lse).matrix();
}

// ---- checkpoint format ----
// Little-endian binary: magic, version, config, both vocabularies, then the
// tensors by name as raw doubles. load(save(m)) is bit-exact for S = double.

namespace checkpoint_detail {

constexpr char kMagic[8] = {'R', 'N', 'M', 'T', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

inline void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
inline void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
inline void write_string(std::ostream& out, const std::string& s) {
  write_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}
inline std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
inline std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
inline std::string read_string(std::istream& in) {
  std::uint32_t len = read_u32(in);
  std::string s(len, '\0');
  in.read(s.data(), len);
  return s;
}

inline void write_vocab(std::ostream& out, const Vocabulary& vocab) {
  write_u64(out, vocab.capacity());
  write_u64(out, vocab.num_entries());
  for (const auto& entry : vocab.entries()) {
    write_string(out, entry.word);
    write_u64(out, entry.count);
  }
}

}  // namespace checkpoint_detail

template <class S>
void Model<S>::save(const std::string& path) const {
  namespace ck = checkpoint_detail;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path);
  out.write(ck::kMagic, sizeof ck::kMagic);
  ck::write_u32(out, ck::kVersion);
  ck::write_u32(out, static_cast<std::uint32_t>(config_.head));
  ck::write_u32(out, static_cast<std::uint32_t>(config_.layers));
  ck::write_u32(out, static_cast<std::uint32_t>(config_.hidden));
  ck::write_u32(out, static_cast<std::uint32_t>(config_.embedding));
  ck::write_u32(out, static_cast<std::uint32_t>(config_.attention_dim));
  ck::write_vocab(out, source_vocab_);
  ck::write_vocab(out, target_vocab_);
  ck::write_u32(out, static_cast<std::uint32_t>(tensors_.size()));
  for (const auto& tensor : tensors_) {
    ck::write_string(out, tensor->name);
    ck::write_u64(out, static_cast<std::uint64_t>(tensor->rows()));
    ck::write_u64(out, static_cast<std::uint64_t>(tensor->cols()));
    for (Eigen::Index c = 0; c < tensor->cols(); ++c) {
      for (Eigen::Index r = 0; r < tensor->rows(); ++r) {
        double value = static_cast<double>(tensor->value(r, c));
        out.write(reinterpret_cast<const char*>(&value), sizeof value);
      }
    }
  }
  if (!out) throw DataError("I/O error while writing " + path);
}

template <class S>
Model<S> Model<S>::load(const std::string& path) {
  namespace ck = checkpoint_detail;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, ck::kMagic, sizeof magic) != 0)
    throw DataError(path + ": not a model checkpoint");
  std::uint32_t version = ck::read_u32(in);
  if (version != ck::kVersion)
    throw DataError(path + ": unsupported checkpoint version " + std::to_string(version));

  ModelConfig config;
  config.head = static_cast<OutputHead>(ck::read_u32(in));
  config.layers = static_cast<int>(ck::read_u32(in));
  config.hidden = static_cast<int>(ck::read_u32(in));
  config.embedding = static_cast<int>(ck::read_u32(in));
  config.attention_dim = static_cast<int>(ck::read_u32(in));

  auto read_vocab = [&](const char* what) {
    std::uint64_t k = ck::read_u64(in);
    std::uint64_t count = ck::read_u64(in);
    std::vector<Vocabulary::Entry> entries;
    entries.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      std::string word = ck::read_string(in);
      std::uint64_t c = ck::read_u64(in);
      entries.push_back({std::move(word), c});
    }
    if (!in) throw DataError(path + ": truncated " + what + " vocabulary");
    return Vocabulary::from_entries(std::move(entries), k);
  };
  Vocabulary source_vocab = read_vocab("source");
  Vocabulary target_vocab = read_vocab("target");

  Model model(config, std::move(source_vocab), std::move(target_vocab), /*seed=*/0);
  std::uint32_t tensor_count = ck::read_u32(in);
  if (tensor_count != model.tensors_.size())
    throw DataError(path + ": tensor count mismatch");
  for (std::uint32_t i = 0; i < tensor_count; ++i) {
    std::string name = ck::read_string(in);
    std::uint64_t rows = ck::read_u64(in);
    std::uint64_t cols = ck::read_u64(in);
    Tensor<S>& tensor = model.tensor(name);
    if (static_cast<std::uint64_t>(tensor.rows()) != rows ||
        static_cast<std::uint64_t>(tensor.cols()) != cols)
      throw DataError(path + ": tensor shape mismatch for " + name);
    for (Eigen::Index c = 0; c < tensor.cols(); ++c) {
      for (Eigen::Index r = 0; r < tensor.rows(); ++r) {
        double value = 0;
        in.read(reinterpret_cast<char*>(&value), sizeof value);
        tensor.value(r, c) = static_cast<S>(value);
      }
    }
  }
  if (!in) throw DataError(path + ": truncated checkpoint");
  return model;
}

}  // namespace rarenmt
