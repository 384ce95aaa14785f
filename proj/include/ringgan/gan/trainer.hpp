#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include "ringgan/gan/history_buffer.hpp"
#include "ringgan/gan/losses.hpp"
#include "ringgan/gan/networks.hpp"
#include "ringgan/tensor/adam.hpp"
#include "ringgan/tensor/checkpoint.hpp"

namespace ringgan::gan {

struct TrainConfig {
  int epochs_phase1 = 100;
  int epochs_phase2 = 100;
  double lr_phase1 = 0.0002;
  double lr_phase2 = 0.00002;
  int batch_size = 1;
  double d_loss_scale = 0.5;
  int history_buffer_size = 50;
  int image_size = 64;
  std::uint64_t seed = 0;
  LossWeights weights;
  AdversarialMode adversarial = AdversarialMode::kBce;
  GeneratorConfig generator;
  DiscriminatorConfig discriminator;

  int total_epochs() const { return epochs_phase1 + epochs_phase2; }
  void validate() const;

  /// Narrow networks (16 base channels) for quick CPU runs.
  static TrainConfig smoke(int image_size = 32);
};

void to_json(nlohmann::json& j, const TrainConfig& c);
/// Missing fields keep their defaults; unknown fields are rejected.
void from_json(const nlohmann::json& j, TrainConfig& c);

/// lr_phase1 for epochs before epochs_phase1, lr_phase2 until total_epochs().
double lr_schedule(int epoch, const TrainConfig& config);

/// A loss term became NaN or infinite; parameters were not updated.
class NonFiniteLoss : public std::runtime_error {
 public:
  NonFiniteLoss(const std::string& term, std::int64_t step, double value);
  const std::string& term() const { return term_; }

 private:
  std::string term_;
};

struct StepMetrics {
  int epoch = 0;
  std::int64_t step = 0;
  double lr = 0.0;
  double gan_ab = 0.0;
  double gan_ba = 0.0;
  double cycle = 0.0;
  double identity = 0.0;
  double g_total = 0.0;
  double d_a = 0.0;
  double d_b = 0.0;

  friend bool operator==(const StepMetrics&, const StepMetrics&) = default;
};

void to_json(nlohmann::json& j, const StepMetrics& m);

/// Next batch to train on: (epoch, index within epoch).
struct TrainPosition {
  int epoch = 0;
  std::int64_t index = 0;
};

/// Owns both generators, both discriminators, their optimizers and history
/// buffers. All state is captured by checkpoint(), so a restored trainer
/// continues bit-identically.
class Trainer {
 public:
  explicit Trainer(const TrainConfig& config);
  explicit Trainer(const tensor::Checkpoint& checkpoint);
  Trainer(const Trainer&) = delete;
  Trainer& operator=(const Trainer&) = delete;

  /// One alternating update on batches a (sketches) and b (renders) of shape
  /// [N, 3, S, S]: generators first, then both discriminators.
  StepMetrics train_step(const tensor::Tensorf& a, const tensor::Tensorf& b, int epoch);

  /// The two halves of train_step, exposed for inspection. discriminator_phase
  /// consumes the fakes produced by the preceding generator_phase.
  StepMetrics generator_phase(const tensor::Tensorf& a, const tensor::Tensorf& b, int epoch);
  void discriminator_phase(const tensor::Tensorf& a, const tensor::Tensorf& b, StepMetrics& metrics);

  tensor::Checkpoint checkpoint() const;

  const TrainConfig& config() const { return config_; }
  std::int64_t step() const { return step_; }
  TrainPosition position() const { return position_; }
  void set_position(TrainPosition p) { position_ = p; }

  const Generator& g_ab() const { return g_ab_; }
  const Generator& g_ba() const { return g_ba_; }
  const Discriminator& d_a() const { return d_a_; }
  const Discriminator& d_b() const { return d_b_; }
  Generator& g_ab() { return g_ab_; }
  Generator& g_ba() { return g_ba_; }

 private:
  void restore(const tensor::Checkpoint& checkpoint);

  TrainConfig config_;
  Generator g_ab_;
  Generator g_ba_;
  Discriminator d_a_;
  Discriminator d_b_;
  tensor::Adam<float> g_opt_;
  tensor::Adam<float> d_a_opt_;
  tensor::Adam<float> d_b_opt_;
  HistoryBuffer pool_a_;
  HistoryBuffer pool_b_;
  Rng noise_rng_;
  std::int64_t step_ = 0;
  TrainPosition position_;
  tensor::Tensorf pending_fake_a_;
  tensor::Tensorf pending_fake_b_;
};

/// Source of unpaired training batches for fit().
struct BatchSource {
  std::function<std::int64_t(int epoch)> steps_in_epoch;
  std::function<std::pair<tensor::Tensorf, tensor::Tensorf>(int epoch, std::int64_t index)> batch;
};

struct FitOptions {
  std::filesystem::path checkpoint_path;  // written periodically and at the end
  std::filesystem::path metrics_log;      // NDJSON, appended
  std::int64_t checkpoint_every = 100;    // steps; epoch ends always checkpoint
  std::optional<std::int64_t> max_steps;  // stop early after this many steps in this call
  std::function<void(const StepMetrics&)> on_step;
};

/// Runs the schedule from the trainer's position to the end (or max_steps).
/// On a non-finite loss the last checkpoint on disk is left untouched and
/// NonFiniteLoss propagates.
void fit(Trainer& trainer, const BatchSource& source, const FitOptions& options);

}  // namespace ringgan::gan
