#pragma once

#include <cstdint>
#include <vector>

#include "farp/loss.hpp"
#include "farp/policy.hpp"

namespace farp {

// Desk-scale stand-in for the real dataset: feature vectors drawn from a
// unit Gaussian, binary labels from fixed random hyperplanes, and
// small-magnitude mouse labels whose sign is a linear function of the
// features. The tiny magnitudes are the point: plain squared error barely
// reacts to a wrong sign here, the signed mask reacts 3x.
struct SyntheticTaskConfig {
  std::uint32_t feature_dim = 8;
  std::uint32_t train_samples = 512;
  std::uint32_t heldout_samples = 512;
  double mouse_magnitude = 0.05;
};

struct SyntheticTask {
  std::vector<TrainSample> train;
  std::vector<TrainSample> heldout;
};

SyntheticTask make_synthetic_task(const SyntheticTaskConfig& cfg,
                                  std::uint64_t seed);

// Fraction of held-out samples whose predicted mouse sign matches the
// label, pooled over both axes.
double mouse_sign_agreement(const SurrogatePolicy& policy,
                            std::span<const TrainSample> samples);

struct DemoConfig {
  std::uint32_t steps = 500;
  std::uint64_t seed = 7;
  std::uint32_t batch_size = 32;
  bool plain_mse = false;  // ablation: sign mask forced to 1
  SyntheticTaskConfig task;
  // Training-demo schedule; the published base_lr targets the full-size
  // network, the surrogate needs a desk-scale one.
  double base_lr = 0.08;
  std::uint32_t warmup_epochs = 100;
};

struct DemoResult {
  double initial_loss = 0.0;  // full-train-set loss before any step
  double final_loss = 0.0;    // full-train-set loss after the last step
  std::vector<double> loss_curve;  // pre-step batch loss per step
  double sign_agreement = 0.0;     // held-out, after training
};

// Seeded end-to-end run of the surrogate training loop; the CLI train-demo
// subcommand and the acceptance suite both drive this.
DemoResult run_training_demo(const DemoConfig& cfg);

}  // namespace farp
