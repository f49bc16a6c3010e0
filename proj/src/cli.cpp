#include "decompound/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "decompound/corpus.hpp"
#include "decompound/eval.hpp"
#include "decompound/lexicon.hpp"
#include "decompound/model_io.hpp"
#include "decompound/parallel.hpp"
#include "decompound/splitter.hpp"
#include "decompound/synth.hpp"
#include "decompound/text.hpp"
#include "decompound/trainer.hpp"

namespace decompound::cli {

namespace fs = std::filesystem;

namespace {

struct ModelFlags {
  neural::ModelConfig config;

  void bind(CLI::App& app) {
    app.add_option("--layers", config.num_layers, "BiLSTM layers")
        ->check(CLI::IsMember({1, 2}))
        ->capture_default_str();
    app.add_option("--embed-dim", config.embed_dim, "Character embedding size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--hidden", config.hidden_dim, "Hidden units per direction")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--max-len", config.max_len, "Maximum word length in characters")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--lr", config.learning_rate, "Adam learning rate")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--epochs", config.max_epochs, "Maximum epochs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--patience", config.patience,
                   "Stop after this many epochs without validation improvement")
        ->capture_default_str();
    app.add_option("--batch", config.batch_size, "Mini-batch size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--seed", config.seed, "Random seed")->capture_default_str();
  }
};

std::vector<corpus::AnnotatedWord> read_words(const std::string& path, corpus::Format format,
                                              std::ostream& err) {
  auto words = corpus::read_corpus_file(path, format);
  auto dedup = corpus::deduplicate(std::move(words));
  if (!dedup.conflicts.empty()) {
    err << path << ": " << dedup.conflicts.size()
        << " conflicting analyses dropped (first analysis kept)\n";
  }
  return std::move(dedup.words);
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << contents;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string class_counts(std::span<const corpus::AnnotatedWord> words) {
  std::size_t compounds = 0;
  for (const auto& w : words) compounds += w.is_compound();
  std::ostringstream s;
  s << words.size() << " words (" << (words.size() - compounds) << " base, " << compounds
    << " compounds)";
  return s.str();
}

std::string history_text(const neural::TrainingHistory& h, std::uint64_t seed) {
  std::ostringstream s;
  s.precision(17);
  s << "# seed\t" << seed << '\n'
    << "# best_epoch\t" << h.best_epoch << '\n'
    << "epoch\ttrain_loss\tval_accuracy\timproved\n";
  for (const auto& e : h.epochs) {
    s << e.epoch << '\t' << e.train_loss << '\t' << e.validation_accuracy << '\t'
      << (e.improved ? 1 : 0) << '\n';
  }
  return s.str();
}

struct Engine {
  std::string name = "bilstm";
  std::string model_path;
  std::string lexicon_path;

  std::unique_ptr<neural::TrainedModel> model;
  std::unique_ptr<baseline::PartLexicon> lexicon;
  std::unique_ptr<BinarySplitter> splitter;

  void bind(CLI::App& app) {
    app.add_option("--engine", name, "Splitting backend")
        ->check(CLI::IsMember({"bilstm", "kvistur1"}))
        ->capture_default_str();
    app.add_option("--model", model_path, "Trained BiLSTM model (bilstm engine)")
        ->check(CLI::ExistingFile);
    app.add_option("--lexicon", lexicon_path, "Part lexicon (kvistur1 engine)")
        ->check(CLI::ExistingFile);
  }

  // Returns an error message, empty on success.
  std::string load() {
    if (name == "bilstm") {
      if (model_path.empty()) return "--model is required for the bilstm engine";
      model = std::make_unique<neural::TrainedModel>(neural::load_model(fs::path(model_path)));
      splitter = std::make_unique<NeuralSplitter>(*model);
    } else {
      if (lexicon_path.empty()) return "--lexicon is required for the kvistur1 engine";
      lexicon = std::make_unique<baseline::PartLexicon>(baseline::load_lexicon(lexicon_path));
      splitter = std::make_unique<LexiconSplitter>(*lexicon);
    }
    return {};
  }
};

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(item, &pos);
    if (pos != item.size()) throw std::invalid_argument("bad size '" + item + "'");
    sizes.push_back(static_cast<std::size_t>(v));
  }
  return sizes;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app("Compound word splitting with a character BiLSTM and a lexicon baseline",
               "decompound");
  app.require_subcommand(1);

  // partition
  std::string part_corpus, part_format = "tree", part_outdir = ".";
  std::uint64_t part_seed = 1;
  auto* partition = app.add_subcommand("partition", "Split a corpus 80/10/10 by lemma group");
  partition->add_option("--corpus", part_corpus, "Annotated corpus")->required()->check(CLI::ExistingFile);
  partition->add_option("--format", part_format, "Corpus format")
      ->check(CLI::IsMember({"tree", "flat"}))
      ->capture_default_str();
  partition->add_option("--seed", part_seed, "Random seed")->capture_default_str();
  partition->add_option("--outdir", part_outdir, "Directory for train.tsv, val.tsv, test.tsv")
      ->capture_default_str();

  // train
  ModelFlags train_flags;
  std::string train_path, val_path, train_format = "tree", model_out = "model.kvst", history_out;
  auto* train = app.add_subcommand("train", "Train the BiLSTM splitter");
  train->add_option("--train", train_path, "Training corpus")->required()->check(CLI::ExistingFile);
  train->add_option("--val", val_path, "Validation corpus (omit to train without early stopping)")
      ->check(CLI::ExistingFile);
  train->add_option("--format", train_format, "Corpus format")
      ->check(CLI::IsMember({"tree", "flat"}))
      ->capture_default_str();
  train->add_option("--out", model_out, "Model file to write")->capture_default_str();
  train->add_option("--history", history_out, "Per-epoch history file (default: <out>.history.tsv)");
  train_flags.bind(*train);

  // split
  Engine split_engine;
  std::string split_input;
  bool binary_only = false;
  std::size_t max_depth = kDefaultMaxDepth;
  auto* split = app.add_subcommand("split", "Split words read from a file or standard input");
  split_engine.bind(*split);
  split->add_option("--input", split_input, "Word list, one per line (default: standard input)")
      ->check(CLI::ExistingFile);
  split->add_flag("--binary-only", binary_only, "Print only the top-level split index (0 = none)");
  split->add_option("--max-depth", max_depth, "Recursion limit for tree derivation")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  // eval
  Engine eval_engine;
  std::string eval_test, eval_format = "tree", eval_report, eval_predictions;
  bool eval_oracle = false;
  auto* evalc = app.add_subcommand("eval", "Score a splitter against a gold test file");
  eval_engine.bind(*evalc);
  evalc->add_option("--test", eval_test, "Gold test corpus")->required()->check(CLI::ExistingFile);
  evalc->add_option("--format", eval_format, "Corpus format")
      ->check(CLI::IsMember({"tree", "flat"}))
      ->capture_default_str();
  evalc->add_option("--report", eval_report, "Write metric<TAB>value lines here");
  evalc->add_option("--predictions", eval_predictions,
                    "Score precomputed `form<TAB>index` predictions instead of running an engine")
      ->check(CLI::ExistingFile);
  evalc->add_flag("--oracle", eval_oracle, "Predict the gold top-level split (sanity check)");

  // curve
  ModelFlags curve_flags;
  curve_flags.config.num_layers = 2;
  std::string curve_train, curve_val, curve_test, curve_freq, curve_format = "tree",
                                                                curve_sizes = "2000",
                                                                curve_out = "curve.tsv";
  std::size_t curve_max = 0;
  auto* curve = app.add_subcommand("curve", "Learning curve over frequency-ordered training subsets");
  curve->add_option("--train", curve_train, "Full training corpus")->required()->check(CLI::ExistingFile);
  curve->add_option("--val", curve_val, "Validation corpus")->required()->check(CLI::ExistingFile);
  curve->add_option("--test", curve_test, "Test corpus")->required()->check(CLI::ExistingFile);
  curve->add_option("--freq", curve_freq, "Frequency list, form<TAB>count")->required()->check(CLI::ExistingFile);
  curve->add_option("--format", curve_format, "Corpus format")
      ->check(CLI::IsMember({"tree", "flat"}))
      ->capture_default_str();
  curve->add_option("--sizes", curve_sizes,
                    "Comma-separated sizes; a single size starts a doubling schedule")
      ->capture_default_str();
  curve->add_option("--max-size", curve_max,
                    "Last size of the doubling schedule (default: training set size)");
  curve->add_option("--out", curve_out, "Curve table to write")->capture_default_str();
  curve_flags.bind(*curve);

  // gen-synth
  synth::SynthOptions synth_opts;
  std::string synth_out = "synth.tsv", synth_freq, synth_grouping = "lemma";
  auto* gen = app.add_subcommand("gen-synth", "Generate a deterministic synthetic tree corpus");
  gen->add_option("--words", synth_opts.words, "Number of word forms")->capture_default_str();
  gen->add_option("--seed", synth_opts.seed, "Random seed")->capture_default_str();
  gen->add_option("--compound-fraction", synth_opts.compound_fraction, "Share of compounds")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen->add_option("--grouping", synth_grouping, "Lemma groups per lemma or per head root")
      ->check(CLI::IsMember({"lemma", "head"}))
      ->capture_default_str();
  gen->add_option("--out", synth_out, "Corpus file to write")->capture_default_str();
  gen->add_option("--freq-out", synth_freq, "Frequency list to write");

  // build-lexicon
  std::string lex_corpus, lex_out = "lexicon.tsv";
  auto* build = app.add_subcommand("build-lexicon", "Count parts for the lexicon baseline");
  build->add_option("--corpus", lex_corpus, "Tree-format training corpus")->required()->check(CLI::ExistingFile);
  build->add_option("--out", lex_out, "Lexicon file to write")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*partition) {
      const auto format = corpus::parse_format(part_format);
      const auto words = read_words(part_corpus, format, err);
      const auto parts = corpus::partition(words, part_seed);
      fs::create_directories(part_outdir);
      const std::array<std::pair<const char*, const std::vector<corpus::AnnotatedWord>*>, 3> sets{
          {{"train.tsv", &parts.train}, {"val.tsv", &parts.validation}, {"test.tsv", &parts.test}}};
      for (const auto& [name, set] : sets) {
        std::ostringstream s;
        s << "# seed\t" << part_seed << '\n';
        corpus::write_corpus(s, *set, format);
        write_file(fs::path(part_outdir) / name, s.str());
        out << name << '\t' << class_counts(*set) << '\n';
      }
      return kOk;
    }

    if (*train) {
      const auto format = corpus::parse_format(train_format);
      const auto train_words = read_words(train_path, format, err);
      const auto val_words =
          val_path.empty() ? std::vector<corpus::AnnotatedWord>{} : read_words(val_path, format, err);
      neural::TrainOptions options;
      options.warn = [&](const std::string& m) { err << "warning: " << m << '\n'; };
      options.on_epoch = [&](const neural::EpochRecord& r) {
        out << "epoch " << r.epoch << "\tloss " << r.train_loss << "\tval_acc "
            << eval::percent(r.validation_accuracy) << (r.improved ? "\t*" : "") << '\n';
      };
      const auto result = neural::train(train_flags.config, train_words, val_words, options);
      neural::save_model(fs::path(model_out), result.model);
      write_file(history_out.empty() ? model_out + ".history.tsv" : history_out,
                 history_text(result.history, train_flags.config.seed));
      out << "best epoch " << result.history.best_epoch << ", validation accuracy "
          << eval::percent(result.history.best_validation_accuracy) << '\n';
      return kOk;
    }

    if (*split) {
      if (const auto msg = split_engine.load(); !msg.empty()) {
        err << msg << '\n';
        return kUsage;
      }
      std::ifstream file;
      if (!split_input.empty()) file.open(split_input);
      std::istream& source = split_input.empty() ? in : file;
      int status = kOk;
      std::string line;
      std::size_t line_no = 0;
      while (std::getline(source, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
          const std::string form = normalize(line);
          if (binary_only) {
            out << form << '\t' << split_engine.splitter->split(form).value_or(0) << '\n';
          } else {
            const ConstituentTree tree = derive_tree(*split_engine.splitter, form, max_depth);
            out << form << '\t' << tree.to_string() << '\n';
          }
        } catch (const std::length_error& e) {
          err << "line " << line_no << ": " << e.what() << '\n';
          status = kFailure;
        } catch (const std::invalid_argument& e) {
          err << "line " << line_no << ": " << e.what() << '\n';
          status = kFailure;
        }
      }
      return status;
    }

    if (*evalc) {
      const auto format = corpus::parse_format(eval_format);
      const auto gold = corpus::read_corpus_file(eval_test, format);
      std::vector<std::optional<std::size_t>> predictions;
      std::string title;
      if (eval_oracle) {
        title = "oracle";
        for (const auto& w : gold) predictions.push_back(corpus::top_level_split(w).split_index);
      } else if (!eval_predictions.empty()) {
        title = eval_predictions;
        std::ifstream pf(eval_predictions);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(pf, line)) {
          ++line_no;
          if (!line.empty() && line.back() == '\r') line.pop_back();
          if (line.empty() || line.front() == '#') continue;
          const auto tab = line.find('\t');
          if (tab == std::string::npos) {
            throw corpus::ParseError(eval_predictions, line_no, "expected form<TAB>index");
          }
          const std::size_t k = predictions.size();
          const std::string form = normalize(line.substr(0, tab));
          if (k < gold.size() && form != gold[k].form) {
            throw corpus::ParseError(eval_predictions, line_no,
                                     "form '" + form + "' does not match gold '" + gold[k].form + "'");
          }
          const auto index = std::stoull(line.substr(tab + 1));
          predictions.push_back(index == 0 ? std::nullopt : std::optional<std::size_t>(index));
        }
        if (predictions.size() != gold.size()) {
          err << "prediction file has " << predictions.size() << " entries, test file has "
              << gold.size() << '\n';
          return kFailure;
        }
      } else {
        if (const auto msg = eval_engine.load(); !msg.empty()) {
          err << msg << '\n';
          return kUsage;
        }
        title = eval_engine.name;
        auto p = eval::predict_all(*eval_engine.splitter, gold, worker_count());
        if (p.unanswerable > 0) {
          err << "warning: " << p.unanswerable << " words exceed the model's length limit, counted as unsplit\n";
        }
        predictions = std::move(p.splits);
      }
      const auto report = eval::evaluate(predictions, gold);
      eval::print_report(out, title, report);
      if (!eval_report.empty()) {
        std::ostringstream s;
        s << "engine\t" << title << '\n';
        if (eval_engine.model) s << "seed\t" << eval_engine.model->config.seed << '\n';
        eval::write_report_values(s, report);
        write_file(eval_report, s.str());
      }
      return kOk;
    }

    if (*curve) {
      const auto format = corpus::parse_format(curve_format);
      const auto train_words = read_words(curve_train, format, err);
      const auto val_words = read_words(curve_val, format, err);
      const auto test_words = corpus::read_corpus_file(curve_test, format);
      const auto freqs = corpus::read_frequency_file(curve_freq);
      auto sizes = parse_sizes(curve_sizes);
      if (sizes.size() == 1) {
        const std::size_t limit = curve_max ? curve_max : train_words.size();
        while (sizes.back() * 2 <= limit) sizes.push_back(sizes.back() * 2);
      }
      neural::TrainOptions options;
      options.warn = [&](const std::string& m) { err << "warning: " << m << '\n'; };
      const auto points = eval::learning_curve(curve_flags.config, train_words, val_words, test_words,
                                               freqs, sizes, options);
      std::ostringstream s;
      eval::write_curve(s, points, curve_flags.config.seed);
      write_file(curve_out, s.str());
      out << s.str();
      return kOk;
    }

    if (*gen) {
      synth_opts.grouping = synth_grouping == "head" ? synth::Grouping::head : synth::Grouping::lemma;
      const auto generated = synth::generate(synth_opts);
      std::ostringstream s;
      s << "# seed\t" << synth_opts.seed << '\n';
      corpus::write_corpus(s, generated.words, corpus::Format::tree);
      write_file(synth_out, s.str());
      if (!synth_freq.empty()) {
        std::ostringstream f;
        f << "# seed\t" << synth_opts.seed << '\n';
        for (const auto& [form, count] : generated.frequencies) f << form << '\t' << count << '\n';
        write_file(synth_freq, f.str());
      }
      out << synth_out << '\t' << class_counts(generated.words) << '\n';
      return kOk;
    }

    if (*build) {
      const auto words = read_words(lex_corpus, corpus::Format::tree, err);
      const auto lex = baseline::build_lexicon(words);
      baseline::save_lexicon(lex_out, lex);
      out << lex_out << '\t' << lex.modifiers().size() << " modifiers, " << lex.heads().size()
          << " heads, " << lex.pairs().size() << " pairs\n";
      return kOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace decompound::cli
