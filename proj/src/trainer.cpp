#include "decompound/trainer.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "decompound/adam.hpp"
#include "decompound/eval.hpp"
#include "decompound/network.hpp"
#include "decompound/text.hpp"

namespace decompound::neural {

std::vector<double> TrainedModel::probabilities(std::string_view form) const {
  return position_probabilities(params, encode_form(form, vocab, config.max_len));
}

std::optional<std::size_t> TrainedModel::predict_split(std::string_view form) const {
  return decide_split(probabilities(form));
}

std::optional<std::size_t> decide_split(std::span<const double> probabilities) {
  std::optional<std::size_t> best;
  for (std::size_t i = 1; i < probabilities.size(); ++i) {
    if (!best || probabilities[i] > probabilities[*best]) best = i;
  }
  if (best && probabilities[*best] >= kSplitThreshold) return best;
  return std::nullopt;
}

bool EarlyStopping::observe(double score) {
  ++epochs_;
  if (epochs_ == 1 || score > best_score_) {
    best_score_ = score;
    best_epoch_ = epochs_;
    since_best_ = 0;
    return true;
  }
  ++since_best_;
  return false;
}

double word_accuracy(const TrainedModel& model, std::span<const corpus::AnnotatedWord> words) {
  std::vector<std::optional<std::size_t>> predictions;
  std::vector<corpus::AnnotatedWord> kept;
  for (const auto& w : words) {
    if (w.length() > model.config.max_len) continue;
    predictions.push_back(model.predict_split(w.form));
    kept.push_back(w);
  }
  if (kept.empty()) throw std::invalid_argument("word_accuracy: no word fits the model");
  return eval::evaluate(predictions, kept).accuracy;
}

namespace {

std::vector<corpus::AnnotatedWord> fitting(std::span<const corpus::AnnotatedWord> words,
                                           std::size_t max_len, std::size_t& skipped,
                                           const char* what, const TrainOptions& options) {
  std::vector<corpus::AnnotatedWord> out;
  for (const auto& w : words) {
    if (w.length() > max_len) {
      ++skipped;
      if (options.warn) {
        options.warn(std::string("skipping ") + what + " word '" + w.form + "' (" +
                     std::to_string(w.length()) + " > " + std::to_string(max_len) +
                     " characters)");
      }
      continue;
    }
    out.push_back(w);
  }
  return out;
}

}  // namespace

TrainResult train(const ModelConfig& config, std::span<const corpus::AnnotatedWord> train_set,
                  std::span<const corpus::AnnotatedWord> validation_set,
                  const TrainOptions& options) {
  config.validate();
  if (train_set.empty()) throw std::invalid_argument("training set is empty");

  TrainingHistory history;
  const auto train_words = fitting(train_set, config.max_len, history.skipped_train, "training", options);
  const auto val_words =
      fitting(validation_set, config.max_len, history.skipped_validation, "validation", options);
  if (train_words.empty()) throw std::invalid_argument("every training word exceeds max_len");
  const bool selecting = options.validation_scorer || !validation_set.empty();
  if (selecting && !options.validation_scorer && val_words.empty()) {
    throw std::invalid_argument("every validation word exceeds max_len");
  }

  std::vector<std::string> forms;
  forms.reserve(train_words.size());
  for (const auto& w : train_words) forms.push_back(w.form);

  TrainedModel current{config, CharVocab::from_forms(forms), {}};
  current.params = ModelParameters::initialize(config, current.vocab.size(), config.seed);

  std::vector<EncodedWord> encoded;
  encoded.reserve(train_words.size());
  for (const auto& w : train_words) encoded.push_back(encode(w, current.vocab, config));

  AdamState adam = AdamState::for_parameters(current.params);
  std::mt19937_64 shuffle_rng(config.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<std::size_t> order(encoded.size());
  std::iota(order.begin(), order.end(), 0);

  ModelParameters best = current.params;
  EarlyStopping stopping(config.patience);
  std::vector<EncodedWord> batch;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_sum = 0.0;
    double positions = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      double batch_positions = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        batch.push_back(encoded[order[k]]);
        batch_positions += static_cast<double>(encoded[order[k]].length());
      }
      ForwardResult fwd = forward(current.params, batch);
      loss_sum += loss(fwd.probabilities, batch) * batch_positions;
      positions += batch_positions;
      const ModelParameters grads = backward(current.params, fwd.cache, batch);
      adam_step(current.params, grads, adam, config.learning_rate);
    }

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = loss_sum / positions;
    if (!selecting) {
      record.validation_accuracy = std::numeric_limits<double>::quiet_NaN();
      history.epochs.push_back(record);
      if (options.on_epoch) options.on_epoch(record);
      continue;
    }
    record.validation_accuracy = options.validation_scorer
                                     ? options.validation_scorer(current, epoch)
                                     : word_accuracy(current, val_words);
    record.improved = stopping.observe(record.validation_accuracy);
    if (record.improved) best = current.params;
    history.epochs.push_back(record);
    if (options.on_epoch) options.on_epoch(record);
    if (stopping.should_stop()) {
      history.stopped_early = epoch < config.max_epochs;
      break;
    }
  }
  if (!selecting) {
    history.best_epoch = history.epochs.size();
    history.best_validation_accuracy = std::numeric_limits<double>::quiet_NaN();
    return TrainResult{std::move(current), std::move(history)};
  }
  history.best_epoch = stopping.best_epoch();
  history.best_validation_accuracy = stopping.best_score();
  current.params = std::move(best);
  return TrainResult{std::move(current), std::move(history)};
}

}  // namespace decompound::neural
