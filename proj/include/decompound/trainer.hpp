#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "decompound/corpus.hpp"
#include "decompound/model.hpp"
#include "decompound/vocab.hpp"

namespace decompound::neural {

// Everything needed to run inference: immutable after training.
struct TrainedModel {
  ModelConfig config;
  CharVocab vocab;
  ModelParameters params;

  // Per-character split probabilities for a normalized form.
  // Throws std::length_error for forms longer than config.max_len and
  // std::invalid_argument for empty forms.
  std::vector<double> probabilities(std::string_view form) const;
  std::optional<std::size_t> predict_split(std::string_view form) const;
};

inline constexpr double kSplitThreshold = 0.5;

// Picks the most probable split among positions 1..n-1 (lowest index on
// ties) if its probability reaches the threshold. Position 0 is never a
// split.
std::optional<std::size_t> decide_split(std::span<const double> probabilities);

// Tracks the best score seen so far and counts epochs without improvement.
class EarlyStopping {
 public:
  explicit EarlyStopping(std::size_t patience) : patience_(patience) {}

  // Records the score of the next epoch; returns true on a strict improvement.
  bool observe(double score);
  bool should_stop() const { return epochs_ > 0 && since_best_ >= patience_; }
  std::size_t best_epoch() const { return best_epoch_; }
  double best_score() const { return best_score_; }
  std::size_t epochs() const { return epochs_; }

 private:
  std::size_t patience_;
  std::size_t epochs_ = 0;
  std::size_t best_epoch_ = 0;
  std::size_t since_best_ = 0;
  double best_score_ = -1.0;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double validation_accuracy = 0.0;  // NaN when training without validation
  bool improved = false;
};

struct TrainingHistory {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  double best_validation_accuracy = 0.0;
  std::size_t skipped_train = 0;       // over-length words left out
  std::size_t skipped_validation = 0;
  bool stopped_early = false;
};

struct TrainOptions {
  // Replaces the validation-accuracy computation when set.
  std::function<double(const TrainedModel& current, std::size_t epoch)> validation_scorer;
  std::function<void(const EpochRecord&)> on_epoch;
  std::function<void(const std::string&)> warn;
};

struct TrainResult {
  TrainedModel model;  // snapshot with the best validation accuracy
  TrainingHistory history;
};

// Per-word accuracy: a compound is correct iff the predicted split equals
// the gold top-level split, a base word iff nothing is predicted. Words
// longer than max_len are skipped.
double word_accuracy(const TrainedModel& model, std::span<const corpus::AnnotatedWord> words);

// Without a validation set or scorer there is no early stopping: training
// runs for max_epochs and the final parameters are returned.
TrainResult train(const ModelConfig& config, std::span<const corpus::AnnotatedWord> train_set,
                  std::span<const corpus::AnnotatedWord> validation_set,
                  const TrainOptions& options = {});

}  // namespace decompound::neural
