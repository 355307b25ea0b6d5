#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rarenmt/bleu.hpp"
#include "rarenmt/lsw.hpp"
#include "rarenmt/nmt/trainer.hpp"
#include "rarenmt/nmt/translate.hpp"
#include "rarenmt/saa.hpp"

namespace rarenmt {

// Every CLI subcommand maps onto one of these stage runners, and the
// pipeline executes the same runners in declared order, so composing stages
// by hand and running a pipeline produce byte-identical artifacts.

struct GlobalOptions {
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct VocabStageArgs {
  std::string input;
  std::size_t k = 50000;
  std::string output;
};

struct SaaStageArgs {
  std::string vocab;
  std::string affixes;  // empty = built-in 52-affix inventory
  std::uint64_t threshold = 1;
  std::size_t min_stem_chars = 2;
  std::vector<std::string> splits;  // column labels of the report
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string report;  // optional TSV, one column per split
};

struct LswLearnStageArgs {
  std::string vocab;
  std::string pairs;
  std::string input;
  std::uint64_t threshold = 0;
  std::string output;
};

struct LswApplyStageArgs {
  std::string table;
  std::vector<std::string> splits;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::size_t n_best = 1;
  std::size_t max_variants = 64;
  std::string variants_output;  // indexed variant file; single input only
  std::string report;
};

struct BpeLearnStageArgs {
  std::string input;
  std::size_t merges = 50000;
  std::string output;
};

struct BpeApplyStageArgs {
  std::string codes;
  std::vector<std::string> splits;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

struct TrainStageArgs {
  std::string source;
  std::string target;
  std::string source_vocab;  // optional; built from `source` with k when empty
  std::string target_vocab;
  std::size_t k = 50000;
  std::string dev_source;
  std::string dev_target;
  TrainingConfig config;
  std::string model_output;
  std::string log_output;  // optional per-epoch TSV
};

struct TranslateStageArgs {
  std::string model;
  std::string input;
  std::string output;
  std::string scores_output;  // optional TSV: index, chosen variant, score
  bool variants = false;      // input is an indexed variants file
  TranslateOptions options;
};

struct BleuStageArgs {
  std::string hypothesis;
  std::string reference;
  std::string name = "system";
  std::string output;  // optional file receiving the score line
  bool strip_markers = false;
  bool smooth = false;
};

void run_vocab_stage(const VocabStageArgs& args, const GlobalOptions& globals);
std::vector<std::pair<std::string, SegmentationReport>> run_saa_stage(const SaaStageArgs& args,
                                                                      const GlobalOptions& globals);
void run_lsw_learn_stage(const LswLearnStageArgs& args, const GlobalOptions& globals);
std::vector<std::pair<std::string, ReplacementReport>> run_lsw_apply_stage(
    const LswApplyStageArgs& args, const GlobalOptions& globals);
void run_bpe_learn_stage(const BpeLearnStageArgs& args, const GlobalOptions& globals);
void run_bpe_apply_stage(const BpeApplyStageArgs& args, const GlobalOptions& globals);
void run_train_stage(const TrainStageArgs& args, const GlobalOptions& globals);
void run_translate_stage(const TranslateStageArgs& args, const GlobalOptions& globals);
BleuResult run_bleu_stage(const BleuStageArgs& args, const GlobalOptions& globals);

// Indexed variants file: `index<TAB>token token ...`, one variant per line,
// indices ascending, repeated per variant.
void save_variants(const std::vector<SentenceVariants>& variants, const std::string& path);
std::vector<SentenceVariants> load_variants(const std::string& path);

struct PipelineResult {
  std::size_t stages_run = 0;
  std::vector<std::string> artifacts;
};

// Declarative JSON pipeline. Validates the whole stage list (known stages,
// required keys, inputs present on disk or produced by an earlier stage)
// before running anything; a failing stage has its declared outputs removed.
PipelineResult run_pipeline(const std::string& config_path, std::ostream& log);

}  // namespace rarenmt
