// rarenmt: rare-word preprocessing, a small attentional translator and BLEU
// scoring behind one binary. Every subcommand maps onto one pipeline stage,
// so `rarenmt pipeline --config run.json` and the equivalent sequence of
// subcommands produce byte-identical artifacts.

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "rarenmt/error.hpp"
#include "rarenmt/pipeline.hpp"

namespace {

using namespace rarenmt;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

struct Cli {
  GlobalOptions globals;

  VocabStageArgs vocab;
  SaaStageArgs saa;
  LswLearnStageArgs lsw_learn;
  LswApplyStageArgs lsw_apply;
  BpeLearnStageArgs bpe_learn;
  BpeApplyStageArgs bpe_apply;
  TrainStageArgs train;
  TranslateStageArgs translate;
  BleuStageArgs bleu;
  std::string pipeline_config;

  std::string train_head = "baseline";
  bool train_desk = false;
};

void add_split_options(CLI::App* cmd, std::vector<std::string>& splits,
                       std::vector<std::string>& inputs, std::vector<std::string>& outputs) {
  cmd->add_option("--input", inputs, "Input corpus file(s)")->required();
  cmd->add_option("--output", outputs, "Output file(s), one per input")->required();
  cmd->add_option("--split", splits, "Split label(s) for the report columns");
}

int dispatch(const std::string& command, Cli& cli) {
  if (command == "vocab") {
    run_vocab_stage(cli.vocab, cli.globals);
  } else if (command == "saa") {
    auto reports = run_saa_stage(cli.saa, cli.globals);
    for (const auto& [split, report] : reports)
      std::cout << split << ": segmented " << report.types << " word type(s), " << report.tokens
                << " token(s)\n";
  } else if (command == "lsw-learn") {
    run_lsw_learn_stage(cli.lsw_learn, cli.globals);
  } else if (command == "lsw-apply") {
    auto reports = run_lsw_apply_stage(cli.lsw_apply, cli.globals);
    for (const auto& [split, report] : reports)
      std::cout << split << ": replaced " << report.types << " word type(s), " << report.tokens
                << " token(s)\n";
  } else if (command == "bpe-learn") {
    run_bpe_learn_stage(cli.bpe_learn, cli.globals);
  } else if (command == "bpe-apply") {
    run_bpe_apply_stage(cli.bpe_apply, cli.globals);
  } else if (command == "train") {
    if (cli.train_desk) {
      cli.train.config.hidden = 64;
      cli.train.config.embedding = 64;
    }
    cli.train.config.head = head_from_name(cli.train_head);
    cli.train.config.seed = cli.globals.seed;
    run_train_stage(cli.train, cli.globals);
  } else if (command == "translate") {
    run_translate_stage(cli.translate, cli.globals);
  } else if (command == "bleu") {
    BleuResult result = run_bleu_stage(cli.bleu, cli.globals);
    std::cout << result.to_line() << "\n";
  } else if (command == "pipeline") {
    PipelineResult result = run_pipeline(cli.pipeline_config, std::cout);
    std::cout << "pipeline complete: " << result.stages_run << " stage(s), "
              << result.artifacts.size() << " artifact(s)\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rare-word translation toolkit"};
  app.require_subcommand(1);

  Cli cli;
  app.add_option("--seed", cli.globals.seed, "Seed for every random choice")
      ->default_val(std::uint64_t{1});
  app.add_option("--threads", cli.globals.threads, "Worker threads for corpus processing")
      ->default_val(1u);

  auto* vocab = app.add_subcommand("vocab", "Build a frequency-ranked vocabulary");
  vocab->add_option("--input", cli.vocab.input, "Tokenized corpus")->required();
  vocab->add_option("--k", cli.vocab.k, "Keep the K most frequent words")->default_val(50000);
  vocab->add_option("--output", cli.vocab.output, "Vocabulary TSV")->required();

  auto* saa = app.add_subcommand("saa", "Separate affixes of rare/unknown words");
  saa->add_option("--vocab", cli.saa.vocab, "Vocabulary TSV")->required();
  saa->add_option("--affixes", cli.saa.affixes, "Affix inventory file (default: built-in 52)");
  saa->add_option("--threshold", cli.saa.threshold, "Split words with freq <= threshold")
      ->default_val(1);
  saa->add_option("--min-stem-chars", cli.saa.min_stem_chars,
                  "Reject stems shorter than this many characters")
      ->default_val(2);
  add_split_options(saa, cli.saa.splits, cli.saa.inputs, cli.saa.outputs);
  saa->add_option("--report", cli.saa.report, "Write a types/tokens count table");

  auto* lsw_learn = app.add_subcommand("lsw-learn", "Learn a synonym table for OOV words");
  lsw_learn->add_option("--vocab", cli.lsw_learn.vocab, "Training vocabulary TSV")->required();
  lsw_learn->add_option("--pairs", cli.lsw_learn.pairs, "Synonym pairs TSV")->required();
  lsw_learn->add_option("--input", cli.lsw_learn.input, "Text whose words are tabled")->required();
  lsw_learn->add_option("--threshold", cli.lsw_learn.threshold,
                        "Also table in-vocabulary words with freq <= threshold")
      ->default_val(0);
  lsw_learn->add_option("--output", cli.lsw_learn.output, "Synonym table file")->required();

  auto* lsw_apply = app.add_subcommand("lsw-apply", "Replace tabled words by synonyms");
  lsw_apply->add_option("--table", cli.lsw_apply.table, "Synonym table file")->required();
  add_split_options(lsw_apply, cli.lsw_apply.splits, cli.lsw_apply.inputs, cli.lsw_apply.outputs);
  lsw_apply->add_option("--n-best", cli.lsw_apply.n_best, "Synonyms per occurrence for variants")
      ->default_val(1);
  lsw_apply->add_option("--max-variants", cli.lsw_apply.max_variants,
                        "Cap on variants per sentence")
      ->default_val(64);
  lsw_apply->add_option("--variants-output", cli.lsw_apply.variants_output,
                        "Indexed variants file (single input only)");
  lsw_apply->add_option("--report", cli.lsw_apply.report, "Write a types/tokens count table");

  auto* bpe_learn = app.add_subcommand("bpe-learn", "Learn byte-pair-encoding merges");
  bpe_learn->add_option("--input", cli.bpe_learn.input, "Tokenized corpus")->required();
  bpe_learn->add_option("--merges", cli.bpe_learn.merges, "Number of merge rules")
      ->default_val(50000);
  bpe_learn->add_option("--output", cli.bpe_learn.output, "Merge rule file")->required();

  auto* bpe_apply = app.add_subcommand("bpe-apply", "Apply learned merges to text");
  bpe_apply->add_option("--codes", cli.bpe_apply.codes, "Merge rule file")->required();
  add_split_options(bpe_apply, cli.bpe_apply.splits, cli.bpe_apply.inputs, cli.bpe_apply.outputs);

  auto* train = app.add_subcommand("train", "Train the attentional translator");
  train->add_option("--source", cli.train.source, "Source-side training text")->required();
  train->add_option("--target", cli.train.target, "Target-side training text")->required();
  train->add_option("--source-vocab", cli.train.source_vocab,
                    "Vocabulary TSV (default: build from --source)");
  train->add_option("--target-vocab", cli.train.target_vocab,
                    "Vocabulary TSV (default: build from --target)");
  train->add_option("--k", cli.train.k, "Capacity when building vocabularies")->default_val(50000);
  train->add_option("--dev-source", cli.train.dev_source, "Held-out source text");
  train->add_option("--dev-target", cli.train.dev_target, "Held-out target text");
  train->add_option("--head", cli.train_head, "Output head: baseline|ffnn|simplified")
      ->default_val("baseline");
  train->add_option("--layers", cli.train.config.layers)->default_val(2);
  train->add_option("--hidden", cli.train.config.hidden)->default_val(512);
  train->add_option("--embedding", cli.train.config.embedding)->default_val(512);
  train->add_flag("--desk", cli.train_desk, "Desk-scale preset (hidden 64, embedding 64)");
  train->add_option("--learning-rate", cli.train.config.learning_rate)->default_val(0.001);
  train->add_option("--epochs", cli.train.config.epochs)->default_val(16);
  train->add_option("--batch", cli.train.config.batch_size)->default_val(32);
  train->add_option("--model", cli.train.model_output, "Checkpoint output path")->required();
  train->add_option("--log", cli.train.log_output, "Per-epoch TSV log");

  auto* translate = app.add_subcommand("translate", "Translate text with a trained model");
  translate->add_option("--model", cli.translate.model, "Checkpoint path")->required();
  translate->add_option("--input", cli.translate.input, "Input text or variants file")->required();
  translate->add_option("--output", cli.translate.output, "Translated text")->required();
  translate->add_option("--scores", cli.translate.scores_output, "Per-sentence score TSV");
  translate->add_flag("--variants", cli.translate.variants,
                      "Treat the input as an indexed variants file and keep the best-scoring "
                      "variant per sentence");
  translate->add_option("--beam", cli.translate.options.beam_size, "Beam size (1 = greedy)")
      ->default_val(1);
  translate->add_option("--max-len-factor", cli.translate.options.max_len_factor,
                        "Length cap as a multiple of the source length")
      ->default_val(3);

  auto* bleu_cmd = app.add_subcommand("bleu", "Corpus BLEU of a hypothesis against a reference");
  bleu_cmd->add_option("--hypothesis", cli.bleu.hypothesis, "Hypothesis text")->required();
  bleu_cmd->add_option("--reference", cli.bleu.reference, "Reference text")->required();
  bleu_cmd->add_option("--name", cli.bleu.name, "System label")->default_val("system");
  bleu_cmd->add_option("--output", cli.bleu.output, "Write the score line to a file");
  bleu_cmd->add_flag("--strip-markers", cli.bleu.strip_markers,
                     "Join @@ subword markers before scoring");
  bleu_cmd->add_flag("--smooth", cli.bleu.smooth, "Add-one smoothing for tiny corpora");

  auto* pipeline = app.add_subcommand("pipeline", "Run a declarative multi-stage experiment");
  pipeline->add_option("--config", cli.pipeline_config, "Pipeline JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return dispatch(app.get_subcommands().front()->get_name(), cli);
  } catch (const UsageError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitNumeric;
  } catch (const DataError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitData;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitData;
  }
}
