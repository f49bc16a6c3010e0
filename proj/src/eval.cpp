#include "decompound/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace decompound::eval {

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double f_score(double precision, double recall) {
  return 2.0 * precision * recall / (precision + recall);
}

EvalReport EvalReport::from_counts(std::size_t n_base, std::size_t n_compound,
                                   std::size_t correct_base, std::size_t correct_compound,
                                   std::size_t n_predicted_splits, std::size_t n_correct_splits) {
  EvalReport r;
  r.n_base = n_base;
  r.n_compound = n_compound;
  r.n_words = n_base + n_compound;
  r.correct_base = correct_base;
  r.correct_compound = correct_compound;
  r.n_predicted_splits = n_predicted_splits;
  r.n_correct_splits = n_correct_splits;
  r.accuracy = r.n_words == 0 ? 0.0
                              : static_cast<double>(correct_base + correct_compound) /
                                    static_cast<double>(r.n_words);
  r.base_accuracy = ratio(correct_base, n_base);
  r.compound_accuracy = ratio(correct_compound, n_compound);
  r.precision = ratio(n_correct_splits, n_predicted_splits);
  r.recall = ratio(n_correct_splits, n_compound);
  if (r.precision && r.recall && *r.precision + *r.recall > 0.0) {
    r.f_score = eval::f_score(*r.precision, *r.recall);
  }
  return r;
}

EvalReport evaluate(std::span<const std::optional<std::size_t>> predictions,
                    std::span<const corpus::AnnotatedWord> gold) {
  if (predictions.size() != gold.size()) {
    throw std::invalid_argument("evaluate: " + std::to_string(predictions.size()) +
                                " predictions for " + std::to_string(gold.size()) + " words");
  }
  std::size_t n_base = 0, n_compound = 0, correct_base = 0, correct_compound = 0;
  std::size_t predicted = 0, correct_splits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto target = corpus::top_level_split(gold[i]).split_index;
    const auto& p = predictions[i];
    if (p) ++predicted;
    if (target) {
      ++n_compound;
      if (p == target) {
        ++correct_compound;
        ++correct_splits;
      }
    } else {
      ++n_base;
      if (!p) ++correct_base;
    }
  }
  return EvalReport::from_counts(n_base, n_compound, correct_base, correct_compound, predicted,
                                 correct_splits);
}

double tree_exact_match(std::span<const ConstituentTree> predicted,
                        std::span<const corpus::AnnotatedWord> gold) {
  if (predicted.size() != gold.size()) {
    throw std::invalid_argument("tree_exact_match: size mismatch");
  }
  if (gold.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) hits += predicted[i] == gold[i].structure;
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

Predictions predict_all(const BinarySplitter& splitter, std::span<const corpus::AnnotatedWord> words,
                        std::size_t workers) {
  Predictions out;
  out.splits.resize(words.size());
  std::vector<std::uint8_t> rejected(words.size(), 0);
  parallel_for(
      words.size(),
      [&](std::size_t i) {
        try {
          out.splits[i] = splitter.split(words[i].form);
        } catch (const std::length_error&) {
          rejected[i] = 1;
        }
      },
      workers);
  out.unanswerable = static_cast<std::size_t>(std::count(rejected.begin(), rejected.end(), 1));
  return out;
}

std::string percent(std::optional<double> rate) {
  if (!rate || std::isnan(*rate)) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", *rate * 100.0);
  return buf;
}

void print_report(std::ostream& out, const std::string& title, const EvalReport& r) {
  out << title << '\n'
      << "  words        " << r.n_words << " (" << r.n_base << " base, " << r.n_compound
      << " compounds)\n"
      << "  accuracy     " << percent(r.accuracy) << '\n'
      << "  base words   " << percent(r.base_accuracy) << '\n'
      << "  compounds    " << percent(r.compound_accuracy) << '\n'
      << "  precision    " << percent(r.precision) << '\n'
      << "  recall       " << percent(r.recall) << '\n'
      << "  f-score      " << percent(r.f_score) << '\n';
}

namespace {

std::string value(std::optional<double> v) {
  if (!v) return "absent";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

}  // namespace

void write_report_values(std::ostream& out, const EvalReport& r) {
  out << "n_words\t" << r.n_words << '\n'
      << "n_base\t" << r.n_base << '\n'
      << "n_compound\t" << r.n_compound << '\n'
      << "correct_base\t" << r.correct_base << '\n'
      << "correct_compound\t" << r.correct_compound << '\n'
      << "n_predicted_splits\t" << r.n_predicted_splits << '\n'
      << "n_correct_splits\t" << r.n_correct_splits << '\n'
      << "accuracy\t" << value(r.accuracy) << '\n'
      << "base_accuracy\t" << value(r.base_accuracy) << '\n'
      << "compound_accuracy\t" << value(r.compound_accuracy) << '\n'
      << "precision\t" << value(r.precision) << '\n'
      << "recall\t" << value(r.recall) << '\n'
      << "f_score\t" << value(r.f_score) << '\n';
}

std::vector<CurvePoint> learning_curve(const neural::ModelConfig& config,
                                       std::span<const corpus::AnnotatedWord> full_train,
                                       std::span<const corpus::AnnotatedWord> validation,
                                       std::span<const corpus::AnnotatedWord> test,
                                       const corpus::FrequencyTable& freqs,
                                       std::span<const std::size_t> sizes,
                                       const neural::TrainOptions& options) {
  if (sizes.empty()) throw std::invalid_argument("learning_curve: no sizes given");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0 || (i > 0 && sizes[i] <= sizes[i - 1])) {
      throw std::invalid_argument("learning_curve: sizes must be positive and strictly ascending");
    }
    if (sizes[i] > full_train.size()) {
      throw std::invalid_argument("learning_curve: size " + std::to_string(sizes[i]) +
                                  " exceeds training set of " + std::to_string(full_train.size()));
    }
  }
  if (test.empty()) throw std::invalid_argument("learning_curve: empty test set");
  std::vector<CurvePoint> curve;
  for (std::size_t size : sizes) {
    const auto subset = corpus::frequency_subset(full_train, freqs, size);
    const auto trained = neural::train(config, subset, validation, options);
    const NeuralSplitter splitter(trained.model);
    const auto predictions = predict_all(splitter, test);
    curve.push_back({size, evaluate(predictions.splits, test).accuracy, trained.history.best_epoch});
  }
  return curve;
}

void write_curve(std::ostream& out, std::span<const CurvePoint> curve, std::uint64_t seed) {
  out << "# seed\t" << seed << '\n' << "size\taccuracy\tbest_epoch\n";
  for (const auto& p : curve) out << p.size << '\t' << value(p.accuracy) << '\t' << p.best_epoch << '\n';
}

}  // namespace decompound::eval
