#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include "farp/action.hpp"
#include "farp/loss.hpp"

namespace farp {

// Published stack: 5 CNN layers, 4 ConvLSTM layers, 5 MLP layers, with
// per-depth widths given by the closed forms below. Only the calculators
// are provided here; the full network is out of scope for this toolkit.
struct ArchitectureSpec {
  std::uint32_t cnn_depth = 5;
  std::uint32_t convlstm_depth = 4;
  std::uint32_t mlp_depth = 5;

  std::vector<std::uint32_t> cnn_widths() const;
  std::vector<std::uint32_t> convlstm_widths() const;
  std::vector<std::uint32_t> mlp_widths() const;
};

std::uint32_t cnn_width(std::uint32_t depth);       // 74 * 2^(depth-1), depth 1..5
std::uint32_t convlstm_width(std::uint32_t depth);  // 9 + 2*depth,      depth 1..4
std::uint32_t mlp_width(std::uint32_t depth);       // 1984 / 2^(depth-1), depth 1..5

struct TrainSample {
  std::vector<double> features;
  ActionValues target{};
};

struct BatchGradient {
  double loss = 0.0;               // batch-mean combined loss
  std::vector<double> gradient;    // d(mean loss)/d(parameters)
};

// Dense trunk (tanh) with seven un-shared linear output heads: sigmoid on
// the five binary actions, no activation on the two mouse axes. Parameters
// live in one flat vector so gradients can be checked against finite
// differences end to end.
class SurrogatePolicy {
 public:
  SurrogatePolicy(std::uint32_t input_dim, std::vector<std::uint32_t> trunk_widths,
                  std::uint64_t seed);

  std::uint32_t input_dim() const { return input_dim_; }
  const std::vector<std::uint32_t>& trunk_widths() const { return trunk_widths_; }
  std::size_t parameter_count() const { return params_.size(); }
  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }

  // Deterministic given (parameters, features). Binary heads in (0,1).
  ActionValues forward(std::span<const double> features) const;

  // Optional seeded dropout on hidden activations during gradient
  // computation. Off (rate 0) by default; inference is never dropped out.
  void set_dropout(double rate, std::uint64_t seed);

  // Versioned little-endian checkpoint: dims header + f32 parameter vector.
  void save_checkpoint(const std::filesystem::path& path) const;
  static SurrogatePolicy load_checkpoint(const std::filesystem::path& path);

  BatchGradient loss_gradient(std::span<const TrainSample> batch,
                              const LossConfig& cfg) const;

 private:
  friend double train_step(SurrogatePolicy&, std::span<const TrainSample>,
                           const LossConfig&, std::uint64_t);

  std::uint32_t input_dim_ = 0;
  std::vector<std::uint32_t> trunk_widths_;
  std::vector<double> params_;
  double dropout_rate_ = 0.0;
  mutable std::mt19937_64 dropout_rng_;
};

// One gradient-descent step at warmup_lr(epoch, cfg) on the batch-mean
// combined loss. Returns the pre-step loss.
double train_step(SurrogatePolicy& policy, std::span<const TrainSample> batch,
                  const LossConfig& cfg, std::uint64_t epoch);

}  // namespace farp
