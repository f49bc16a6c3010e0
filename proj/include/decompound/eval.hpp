#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "decompound/corpus.hpp"
#include "decompound/model.hpp"
#include "decompound/splitter.hpp"
#include "decompound/parallel.hpp"
#include "decompound/trainer.hpp"

namespace decompound::eval {

struct EvalReport {
  std::size_t n_words = 0;
  std::size_t n_base = 0;
  std::size_t n_compound = 0;
  std::size_t correct_base = 0;
  std::size_t correct_compound = 0;
  std::size_t n_predicted_splits = 0;  // words the model split, whatever their class
  std::size_t n_correct_splits = 0;    // compounds split at the gold position

  double accuracy = 0.0;
  std::optional<double> base_accuracy;      // absent when n_base == 0
  std::optional<double> compound_accuracy;  // absent when n_compound == 0
  std::optional<double> precision;          // absent when nothing was split
  std::optional<double> recall;             // absent when n_compound == 0
  std::optional<double> f_score;            // absent when p or r is absent, or p + r == 0

  // Derives every rate from the raw counts.
  static EvalReport from_counts(std::size_t n_base, std::size_t n_compound, std::size_t correct_base,
                                std::size_t correct_compound, std::size_t n_predicted_splits,
                                std::size_t n_correct_splits);
};

double f_score(double precision, double recall);

// A compound is correct iff its predicted split equals the gold top-level
// split; a base word iff nothing is predicted.
EvalReport evaluate(std::span<const std::optional<std::size_t>> predictions,
                    std::span<const corpus::AnnotatedWord> gold);

// Fraction of words whose derived tree equals the gold tree exactly.
double tree_exact_match(std::span<const ConstituentTree> predicted,
                        std::span<const corpus::AnnotatedWord> gold);

struct Predictions {
  std::vector<std::optional<std::size_t>> splits;
  std::size_t unanswerable = 0;  // words the splitter rejected (e.g. too long)
};

// Runs the splitter over every word, in parallel when allowed. Words the
// splitter rejects with std::length_error are counted and left unsplit.
Predictions predict_all(const BinarySplitter& splitter, std::span<const corpus::AnnotatedWord> words,
                        std::size_t workers = 1);

// Percent with two decimals, e.g. "93.30%"; "n/a" for absent values.
std::string percent(std::optional<double> rate);

void print_report(std::ostream& out, const std::string& title, const EvalReport& report);
// `metric<TAB>value` lines.
void write_report_values(std::ostream& out, const EvalReport& report);

struct CurvePoint {
  std::size_t size = 0;
  double accuracy = 0.0;
  std::size_t best_epoch = 0;
};

// Trains on the `size` most frequent training forms for each size and
// records test accuracy.
std::vector<CurvePoint> learning_curve(const neural::ModelConfig& config,
                                       std::span<const corpus::AnnotatedWord> full_train,
                                       std::span<const corpus::AnnotatedWord> validation,
                                       std::span<const corpus::AnnotatedWord> test,
                                       const corpus::FrequencyTable& freqs,
                                       std::span<const std::size_t> sizes,
                                       const neural::TrainOptions& options = {});

void write_curve(std::ostream& out, std::span<const CurvePoint> curve, std::uint64_t seed);

}  // namespace decompound::eval
