#include "rarenmt/pipeline.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <variant>

#include "json.hpp"

#include "rarenmt/bpe.hpp"
#include "rarenmt/error.hpp"

namespace rarenmt {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void ensure_parent_dir(const std::string& path) {
  fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

// Table-shaped count report: one column per split, `types` and `tokens` rows.
template <class Report>
void write_count_report(const std::string& path,
                        const std::vector<std::pair<std::string, Report>>& rows) {
  ensure_parent_dir(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write report: " + path);
  out << '#';
  for (const auto& [split, report] : rows) out << '\t' << split;
  out << "\ntypes";
  for (const auto& [split, report] : rows) out << '\t' << report.types;
  out << "\ntokens";
  for (const auto& [split, report] : rows) out << '\t' << report.tokens;
  out << '\n';
  if (!out) throw DataError("I/O error while writing " + path);
}

void check_split_lists(const std::vector<std::string>& splits,
                       const std::vector<std::string>& inputs,
                       const std::vector<std::string>& outputs) {
  if (inputs.empty()) throw UsageError("at least one input file is required");
  if (inputs.size() != outputs.size())
    throw UsageError("inputs and outputs must pair up (" + std::to_string(inputs.size()) +
                     " vs " + std::to_string(outputs.size()) + ")");
  if (!splits.empty() && splits.size() != inputs.size())
    throw UsageError("split labels must pair up with inputs");
}

std::vector<std::string> split_labels(const std::vector<std::string>& splits, std::size_t n) {
  if (!splits.empty()) return splits;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i)
    labels.push_back(n == 1 ? std::string("all") : "split" + std::to_string(i + 1));
  return labels;
}

}  // namespace

void run_vocab_stage(const VocabStageArgs& args, const GlobalOptions&) {
  Corpus corpus = load_corpus(args.input, Side::source);
  Vocabulary vocab = Vocabulary::build(corpus, args.k);
  ensure_parent_dir(args.output);
  vocab.save(args.output);
}

std::vector<std::pair<std::string, SegmentationReport>> run_saa_stage(
    const SaaStageArgs& args, const GlobalOptions& globals) {
  check_split_lists(args.splits, args.inputs, args.outputs);
  Vocabulary vocab = Vocabulary::load(args.vocab);
  AffixInventory inventory =
      args.affixes.empty() ? AffixInventory::default_english() : AffixInventory::load(args.affixes);
  SaaOptions options;
  options.threshold = args.threshold;
  options.min_stem_chars = args.min_stem_chars;

  std::vector<std::string> labels = split_labels(args.splits, args.inputs.size());
  std::vector<std::pair<std::string, SegmentationReport>> reports;
  for (std::size_t i = 0; i < args.inputs.size(); ++i) {
    Corpus corpus = load_corpus(args.inputs[i], Side::source);
    SaaResult result = apply_saa(corpus, vocab, inventory, options, globals.threads);
    ensure_parent_dir(args.outputs[i]);
    save_corpus(result.corpus, args.outputs[i]);
    reports.emplace_back(labels[i], result.report);
  }
  if (!args.report.empty()) write_count_report(args.report, reports);
  return reports;
}

void run_lsw_learn_stage(const LswLearnStageArgs& args, const GlobalOptions&) {
  Vocabulary vocab = Vocabulary::load(args.vocab);
  SynonymStore store = SynonymStore::load(args.pairs);
  Corpus corpus = load_corpus(args.input, Side::source);
  SynonymTable table = SynonymTable::learn(vocab, corpus, store, args.threshold);
  ensure_parent_dir(args.output);
  table.save(args.output);
}

std::vector<std::pair<std::string, ReplacementReport>> run_lsw_apply_stage(
    const LswApplyStageArgs& args, const GlobalOptions& globals) {
  check_split_lists(args.splits, args.inputs, args.outputs);
  if (!args.variants_output.empty() && args.inputs.size() != 1)
    throw UsageError("variant output requires exactly one input file");
  SynonymTable table = SynonymTable::load(args.table);

  std::vector<std::string> labels = split_labels(args.splits, args.inputs.size());
  std::vector<std::pair<std::string, ReplacementReport>> reports;
  for (std::size_t i = 0; i < args.inputs.size(); ++i) {
    Corpus corpus = load_corpus(args.inputs[i], Side::source);
    Corpus replaced = apply_lsw(corpus, table, globals.threads);
    ensure_parent_dir(args.outputs[i]);
    save_corpus(replaced, args.outputs[i]);
    reports.emplace_back(labels[i], report_replacements(corpus, replaced, table));
    if (!args.variants_output.empty()) {
      std::vector<SentenceVariants> variants =
          apply_lsw_variants(corpus, table, args.n_best, args.max_variants);
      ensure_parent_dir(args.variants_output);
      save_variants(variants, args.variants_output);
    }
  }
  if (!args.report.empty()) write_count_report(args.report, reports);
  return reports;
}

void run_bpe_learn_stage(const BpeLearnStageArgs& args, const GlobalOptions&) {
  Corpus corpus = load_corpus(args.input, Side::source);
  MergeList merges = bpe_learn(corpus, args.merges);
  ensure_parent_dir(args.output);
  merges.save(args.output);
}

void run_bpe_apply_stage(const BpeApplyStageArgs& args, const GlobalOptions& globals) {
  check_split_lists(args.splits, args.inputs, args.outputs);
  MergeList merges = MergeList::load(args.codes);
  for (std::size_t i = 0; i < args.inputs.size(); ++i) {
    Corpus corpus = load_corpus(args.inputs[i], Side::source);
    Corpus applied = bpe_apply(corpus, merges, globals.threads);
    ensure_parent_dir(args.outputs[i]);
    save_corpus(applied, args.outputs[i]);
  }
}

void run_train_stage(const TrainStageArgs& args, const GlobalOptions&) {
  ParallelCorpus data = ParallelCorpus::load(args.source, args.target);
  Vocabulary source_vocab = args.source_vocab.empty()
                                ? Vocabulary::build(data.source, args.k)
                                : Vocabulary::load(args.source_vocab);
  Vocabulary target_vocab = args.target_vocab.empty()
                                ? Vocabulary::build(data.target, args.k)
                                : Vocabulary::load(args.target_vocab);

  ParallelCorpus heldout;
  bool has_heldout = !args.dev_source.empty() || !args.dev_target.empty();
  if (has_heldout) {
    if (args.dev_source.empty() || args.dev_target.empty())
      throw UsageError("held-out data needs both a source and a target file");
    heldout = ParallelCorpus::load(args.dev_source, args.dev_target);
  }

  TrainedModel<double> trained = train_model<double>(data, has_heldout ? &heldout : nullptr,
                                                     source_vocab, target_vocab, args.config);
  ensure_parent_dir(args.model_output);
  trained.model.save(args.model_output);
  if (!args.log_output.empty()) {
    ensure_parent_dir(args.log_output);
    write_training_log(args.log_output, trained.history);
  }
}

void run_translate_stage(const TranslateStageArgs& args, const GlobalOptions&) {
  Model<double> model = Model<double>::load(args.model);
  ensure_parent_dir(args.output);
  std::ofstream out(args.output, std::ios::binary);
  if (!out) throw DataError("cannot write translations: " + args.output);
  std::ofstream scores;
  if (!args.scores_output.empty()) {
    ensure_parent_dir(args.scores_output);
    scores.open(args.scores_output, std::ios::binary);
    if (!scores) throw DataError("cannot write scores: " + args.scores_output);
  }
  char line[128];

  if (args.variants) {
    std::vector<SentenceVariants> groups = load_variants(args.input);
    if (scores.is_open()) scores << "index\tvariant\tscore\tnormalized\n";
    for (std::size_t i = 0; i < groups.size(); ++i) {
      VariantChoice<double> choice = select_best_variant(model, groups[i], args.options);
      out << join_tokens(choice.translation.tokens) << '\n';
      if (scores.is_open()) {
        std::snprintf(line, sizeof line, "%zu\t%zu\t%.17g\t%.17g\n", i, choice.variant_index,
                      choice.translation.score, choice.translation.normalized_score());
        scores << line;
      }
    }
  } else {
    Corpus corpus = load_corpus(args.input, Side::source);
    if (scores.is_open()) scores << "index\tscore\tnormalized\n";
    bool warned_empty = false;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (corpus.sentences[i].empty()) {
        // Keep the line alignment; an empty source has no translation.
        if (!warned_empty) {
          std::cerr << "warning: empty input line(s) copied through untranslated\n";
          warned_empty = true;
        }
        out << '\n';
        if (scores.is_open()) {
          std::snprintf(line, sizeof line, "%zu\t%.17g\t%.17g\n", i, 0.0, 0.0);
          scores << line;
        }
        continue;
      }
      Translation translation = translate(model, corpus.sentences[i], args.options);
      out << join_tokens(translation.tokens) << '\n';
      if (scores.is_open()) {
        std::snprintf(line, sizeof line, "%zu\t%.17g\t%.17g\n", i, translation.score,
                      translation.normalized_score());
        scores << line;
      }
    }
  }
  if (!out || (scores.is_open() && !scores)) throw DataError("I/O error while writing translations");
}

BleuResult run_bleu_stage(const BleuStageArgs& args, const GlobalOptions&) {
  Corpus hypothesis = load_corpus(args.hypothesis, Side::target);
  Corpus reference = load_corpus(args.reference, Side::target);
  if (args.strip_markers) {
    hypothesis = strip_subword_markers(hypothesis);
    reference = strip_subword_markers(reference);
  }
  BleuOptions options;
  options.smooth_add_one = args.smooth;
  BleuResult result = bleu(hypothesis, reference, options);
  if (!args.output.empty()) {
    ensure_parent_dir(args.output);
    std::ofstream out(args.output, std::ios::binary);
    if (!out) throw DataError("cannot write score file: " + args.output);
    out << result.to_line() << '\n';
    if (!out) throw DataError("I/O error while writing " + args.output);
  }
  return result;
}

void save_variants(const std::vector<SentenceVariants>& variants, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write variants file: " + path);
  for (std::size_t i = 0; i < variants.size(); ++i)
    for (const Sentence& variant : variants[i].variants)
      out << i << '\t' << join_tokens(variant) << '\n';
  if (!out) throw DataError("I/O error while writing " + path);
}

std::vector<SentenceVariants> load_variants(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open variants file: " + path);
  std::vector<SentenceVariants> groups;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected 'index<TAB>tokens'");
    std::size_t index = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + tab, index);
    if (ec != std::errc() || ptr != line.data() + tab)
      throw DataError(path + ":" + std::to_string(line_no) + ": malformed variant index");
    if (index == groups.size()) {
      groups.emplace_back();
    } else if (index != groups.size() - 1) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": variant indices must be contiguous and ascending");
    }
    groups.back().variants.push_back(split_tokens(line.substr(tab + 1)));
  }
  if (in.bad()) throw DataError("I/O error while reading " + path);
  return groups;
}

// ---------------------------------------------------------------------------
// JSON pipeline

namespace {

using StageArgs = std::variant<VocabStageArgs, SaaStageArgs, LswLearnStageArgs, LswApplyStageArgs,
                               BpeLearnStageArgs, BpeApplyStageArgs, TrainStageArgs,
                               TranslateStageArgs, BleuStageArgs>;

struct ParsedStage {
  std::string kind;
  StageArgs args;
  std::vector<std::string> inputs;   // must exist or be produced earlier
  std::vector<std::string> outputs;  // removed when the stage fails
};

std::string context_of(std::size_t index, const std::string& kind) {
  return "pipeline stage " + std::to_string(index + 1) + " (" + kind + ")";
}

const json& require_key(const json& stage, const char* key, const std::string& context) {
  auto it = stage.find(key);
  if (it == stage.end())
    throw DataError(context + ": missing required key '" + key + "'");
  return *it;
}

std::string require_string(const json& stage, const char* key, const std::string& context) {
  const json& value = require_key(stage, key, context);
  if (!value.is_string()) throw DataError(context + ": '" + key + "' must be a string");
  return value.get<std::string>();
}

std::string optional_string(const json& stage, const char* key, const std::string& fallback = "") {
  auto it = stage.find(key);
  return it == stage.end() ? fallback : it->get<std::string>();
}

std::vector<std::string> string_list(const json& stage, const char* singular, const char* plural,
                                     const std::string& context, bool required) {
  if (auto it = stage.find(plural); it != stage.end()) {
    if (!it->is_array()) throw DataError(context + ": '" + plural + "' must be an array");
    std::vector<std::string> values;
    for (const json& item : *it) values.push_back(item.get<std::string>());
    return values;
  }
  if (auto it = stage.find(singular); it != stage.end()) return {it->get<std::string>()};
  if (required) throw DataError(context + ": missing '" + singular + "' or '" + plural + "'");
  return {};
}

template <class T>
T number_or(const json& stage, const char* key, T fallback) {
  auto it = stage.find(key);
  return it == stage.end() ? fallback : it->get<T>();
}

ParsedStage parse_stage(const json& stage, std::size_t index, const GlobalOptions& globals) {
  if (!stage.is_object()) throw DataError("pipeline stage " + std::to_string(index + 1) +
                                          " must be an object");
  std::string kind = require_string(stage, "stage", "pipeline stage " + std::to_string(index + 1));
  std::string context = context_of(index, kind);
  ParsedStage parsed;
  parsed.kind = kind;

  if (kind == "vocab") {
    VocabStageArgs args;
    args.input = require_string(stage, "input", context);
    args.k = number_or<std::size_t>(stage, "k", args.k);
    args.output = require_string(stage, "output", context);
    parsed.inputs = {args.input};
    parsed.outputs = {args.output};
    parsed.args = std::move(args);
  } else if (kind == "saa") {
    SaaStageArgs args;
    args.vocab = require_string(stage, "vocab", context);
    args.affixes = optional_string(stage, "affixes");
    args.threshold = number_or<std::uint64_t>(stage, "threshold", args.threshold);
    args.min_stem_chars = number_or<std::size_t>(stage, "min_stem_chars", args.min_stem_chars);
    args.splits = string_list(stage, "split", "splits", context, false);
    args.inputs = string_list(stage, "input", "inputs", context, true);
    args.outputs = string_list(stage, "output", "outputs", context, true);
    args.report = optional_string(stage, "report");
    check_split_lists(args.splits, args.inputs, args.outputs);
    parsed.inputs = args.inputs;
    parsed.inputs.push_back(args.vocab);
    if (!args.affixes.empty()) parsed.inputs.push_back(args.affixes);
    parsed.outputs = args.outputs;
    if (!args.report.empty()) parsed.outputs.push_back(args.report);
    parsed.args = std::move(args);
  } else if (kind == "lsw-learn") {
    LswLearnStageArgs args;
    args.vocab = require_string(stage, "vocab", context);
    args.pairs = require_string(stage, "pairs", context);
    args.input = require_string(stage, "input", context);
    args.threshold = number_or<std::uint64_t>(stage, "threshold", args.threshold);
    args.output = require_string(stage, "output", context);
    parsed.inputs = {args.vocab, args.pairs, args.input};
    parsed.outputs = {args.output};
    parsed.args = std::move(args);
  } else if (kind == "lsw-apply") {
    LswApplyStageArgs args;
    args.table = require_string(stage, "table", context);
    args.splits = string_list(stage, "split", "splits", context, false);
    args.inputs = string_list(stage, "input", "inputs", context, true);
    args.outputs = string_list(stage, "output", "outputs", context, true);
    args.n_best = number_or<std::size_t>(stage, "n_best", args.n_best);
    args.max_variants = number_or<std::size_t>(stage, "max_variants", args.max_variants);
    args.variants_output = optional_string(stage, "variants_output");
    args.report = optional_string(stage, "report");
    check_split_lists(args.splits, args.inputs, args.outputs);
    parsed.inputs = args.inputs;
    parsed.inputs.push_back(args.table);
    parsed.outputs = args.outputs;
    if (!args.variants_output.empty()) parsed.outputs.push_back(args.variants_output);
    if (!args.report.empty()) parsed.outputs.push_back(args.report);
    parsed.args = std::move(args);
  } else if (kind == "bpe-learn") {
    BpeLearnStageArgs args;
    args.input = require_string(stage, "input", context);
    args.merges = number_or<std::size_t>(stage, "merges", args.merges);
    args.output = require_string(stage, "output", context);
    parsed.inputs = {args.input};
    parsed.outputs = {args.output};
    parsed.args = std::move(args);
  } else if (kind == "bpe-apply") {
    BpeApplyStageArgs args;
    args.codes = require_string(stage, "codes", context);
    args.splits = string_list(stage, "split", "splits", context, false);
    args.inputs = string_list(stage, "input", "inputs", context, true);
    args.outputs = string_list(stage, "output", "outputs", context, true);
    check_split_lists(args.splits, args.inputs, args.outputs);
    parsed.inputs = args.inputs;
    parsed.inputs.push_back(args.codes);
    parsed.outputs = args.outputs;
    parsed.args = std::move(args);
  } else if (kind == "train") {
    TrainStageArgs args;
    args.source = require_string(stage, "source", context);
    args.target = require_string(stage, "target", context);
    args.source_vocab = optional_string(stage, "source_vocab");
    args.target_vocab = optional_string(stage, "target_vocab");
    args.k = number_or<std::size_t>(stage, "k", args.k);
    args.dev_source = optional_string(stage, "dev_source");
    args.dev_target = optional_string(stage, "dev_target");
    args.config.layers = number_or<int>(stage, "layers", args.config.layers);
    args.config.hidden = number_or<int>(stage, "hidden", args.config.hidden);
    args.config.embedding = number_or<int>(stage, "embedding", args.config.embedding);
    args.config.head = head_from_name(optional_string(stage, "head", "baseline"));
    args.config.learning_rate = number_or<double>(stage, "learning_rate", args.config.learning_rate);
    args.config.epochs = number_or<int>(stage, "epochs", args.config.epochs);
    args.config.batch_size = number_or<int>(stage, "batch_size", args.config.batch_size);
    args.config.seed = number_or<std::uint64_t>(stage, "seed", globals.seed);
    args.model_output = require_string(stage, "model", context);
    args.log_output = optional_string(stage, "log");
    parsed.inputs = {args.source, args.target};
    if (!args.source_vocab.empty()) parsed.inputs.push_back(args.source_vocab);
    if (!args.target_vocab.empty()) parsed.inputs.push_back(args.target_vocab);
    if (!args.dev_source.empty()) parsed.inputs.push_back(args.dev_source);
    if (!args.dev_target.empty()) parsed.inputs.push_back(args.dev_target);
    parsed.outputs = {args.model_output};
    if (!args.log_output.empty()) parsed.outputs.push_back(args.log_output);
    parsed.args = std::move(args);
  } else if (kind == "translate") {
    TranslateStageArgs args;
    args.model = require_string(stage, "model", context);
    args.input = require_string(stage, "input", context);
    args.output = require_string(stage, "output", context);
    args.scores_output = optional_string(stage, "scores");
    args.variants = number_or<bool>(stage, "variants", false);
    args.options.beam_size = number_or<int>(stage, "beam", args.options.beam_size);
    args.options.max_len_factor = number_or<int>(stage, "max_len_factor", args.options.max_len_factor);
    parsed.inputs = {args.model, args.input};
    parsed.outputs = {args.output};
    if (!args.scores_output.empty()) parsed.outputs.push_back(args.scores_output);
    parsed.args = std::move(args);
  } else if (kind == "bleu") {
    BleuStageArgs args;
    args.hypothesis = require_string(stage, "hypothesis", context);
    args.reference = require_string(stage, "reference", context);
    args.name = optional_string(stage, "name", "system");
    args.output = optional_string(stage, "output");
    args.strip_markers = number_or<bool>(stage, "strip_markers", false);
    args.smooth = number_or<bool>(stage, "smooth", false);
    parsed.inputs = {args.hypothesis, args.reference};
    if (!args.output.empty()) parsed.outputs = {args.output};
    parsed.args = std::move(args);
  } else {
    throw DataError("pipeline stage " + std::to_string(index + 1) + ": unknown stage '" + kind +
                    "'");
  }
  return parsed;
}

void remove_outputs(const std::vector<std::string>& outputs) {
  for (const std::string& path : outputs) {
    std::error_code ec;
    fs::remove(path, ec);
  }
}

}  // namespace

PipelineResult run_pipeline(const std::string& config_path, std::ostream& log) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw DataError("cannot open pipeline config: " + config_path);
  json config;
  try {
    config = json::parse(in);
  } catch (const json::parse_error& error) {
    throw DataError(config_path + ": " + error.what());
  }
  if (!config.is_object()) throw DataError(config_path + ": config must be a JSON object");

  GlobalOptions globals;
  globals.seed = number_or<std::uint64_t>(config, "seed", globals.seed);
  globals.threads = number_or<unsigned>(config, "threads", globals.threads);
  std::string summary_path = optional_string(config, "summary");

  std::vector<ParsedStage> stages;
  if (auto it = config.find("stages"); it != config.end()) {
    if (!it->is_array()) throw DataError(config_path + ": 'stages' must be an array");
    for (std::size_t i = 0; i < it->size(); ++i)
      stages.push_back(parse_stage((*it)[i], i, globals));
  }

  // Validate before running anything: every input must either exist on disk
  // already or be produced by an earlier stage.
  std::set<std::string> produced;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    for (const std::string& input : stages[i].inputs) {
      if (!produced.count(input) && !fs::exists(input))
        throw DataError(context_of(i, stages[i].kind) + ": input '" + input +
                        "' does not exist and is not produced by an earlier stage");
    }
    produced.insert(stages[i].outputs.begin(), stages[i].outputs.end());
  }

  PipelineResult result;
  std::vector<std::pair<std::string, BleuResult>> scores;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    ParsedStage& stage = stages[i];
    log << "[" << i + 1 << "/" << stages.size() << "] " << stage.kind << "\n";
    try {
      std::visit(
          [&](auto& args) {
            using T = std::decay_t<decltype(args)>;
            if constexpr (std::is_same_v<T, VocabStageArgs>) {
              run_vocab_stage(args, globals);
            } else if constexpr (std::is_same_v<T, SaaStageArgs>) {
              run_saa_stage(args, globals);
            } else if constexpr (std::is_same_v<T, LswLearnStageArgs>) {
              run_lsw_learn_stage(args, globals);
            } else if constexpr (std::is_same_v<T, LswApplyStageArgs>) {
              run_lsw_apply_stage(args, globals);
            } else if constexpr (std::is_same_v<T, BpeLearnStageArgs>) {
              run_bpe_learn_stage(args, globals);
            } else if constexpr (std::is_same_v<T, BpeApplyStageArgs>) {
              run_bpe_apply_stage(args, globals);
            } else if constexpr (std::is_same_v<T, TrainStageArgs>) {
              run_train_stage(args, globals);
            } else if constexpr (std::is_same_v<T, TranslateStageArgs>) {
              run_translate_stage(args, globals);
            } else if constexpr (std::is_same_v<T, BleuStageArgs>) {
              BleuResult score = run_bleu_stage(args, globals);
              log << "  " << args.name << ": " << score.to_line() << "\n";
              scores.emplace_back(args.name, score);
            }
          },
          stage.args);
    } catch (...) {
      remove_outputs(stage.outputs);
      throw;
    }
    ++result.stages_run;
    result.artifacts.insert(result.artifacts.end(), stage.outputs.begin(), stage.outputs.end());
  }

  if (!summary_path.empty()) {
    ensure_parent_dir(summary_path);
    std::ofstream out(summary_path, std::ios::binary);
    if (!out) throw DataError("cannot write summary: " + summary_path);
    out << "system\tbleu\tp1\tp2\tp3\tp4\tbp\thyp_len\tref_len\n";
    char line[256];
    for (const auto& [name, score] : scores) {
      std::snprintf(line, sizeof line, "%s\t%.2f\t%.1f\t%.1f\t%.1f\t%.1f\t%.3f\t%llu\t%llu\n",
                    name.c_str(), score.bleu, score.precisions[0] * 100.0,
                    score.precisions[1] * 100.0, score.precisions[2] * 100.0,
                    score.precisions[3] * 100.0, score.brevity_penalty,
                    static_cast<unsigned long long>(score.hyp_length),
                    static_cast<unsigned long long>(score.ref_length));
      out << line;
    }
    if (!out) throw DataError("I/O error while writing " + summary_path);
    result.artifacts.push_back(summary_path);
  }
  return result;
}

}  // namespace rarenmt
