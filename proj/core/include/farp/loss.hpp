#pragma once

#include <cstdint>
#include <filesystem>

#include "farp/action.hpp"

namespace farp {

inline constexpr double kBceEpsilon = 1e-7;

// Penalizing weights, sign-mask constants, and warm-up parameters.
// Defaults are the final published configuration.
struct LossConfig {
  ActionValues action_weights = {
      0.45,  // mouse_x
      0.45,  // mouse_y
      1.25,  // attack
      0.54,  // move_forward
      1.94,  // move_backward
      1.73,  // move_left
      1.73,  // move_right
  };
  double wrong_sign_mask = 0.5 / 1.5;  // (0 + 0.5) / 1.5
  double right_sign_mask = 1.0;
  std::uint32_t warmup_epochs = 500;
  double base_lr = 0.0002;

  // Weights must lie in (0, 2]; wrong_sign_mask < right_sign_mask.
  void validate() const;
};

struct LossResult {
  double loss = 0.0;
  double dloss_dprediction = 0.0;
};

// 1.0 when prediction and label agree in sign (product strictly positive),
// else 1/3. A zero on either side counts as disagreement.
double sign_mask(double prediction, double label);

// Squared error divided by the sign mask: wrong-direction predictions cost
// 3x. The mask is treated as constant under differentiation.
LossResult mouse_loss(double prediction, double label);

// Binary cross-entropy with the prediction clamped to
// [kBceEpsilon, 1 - kBceEpsilon]. Labels may be fractional (averaged
// targets).
LossResult bce_loss(double prediction, double label);

struct CombinedLoss {
  double total = 0.0;
  ActionValues per_action{};            // weighted per-action components
  ActionValues dtotal_dprediction{};    // gradient w.r.t. each prediction
};

// Weighted sum over all seven actions: mouse_loss on the two mouse axes,
// bce_loss on the five binaries, each scaled by its penalizing weight.
CombinedLoss combined_loss(const ActionValues& predictions,
                           const ActionValues& targets, const LossConfig& cfg);

// base_lr * min(epoch / warmup_epochs, 1): linear ramp, flat afterwards.
double warmup_lr(std::uint64_t epoch, const LossConfig& cfg);

// Reads {"loss": {...}} (or a bare object). Recognized keys:
// action_weights (object keyed by action name, mouse_lr/mouse_ud accepted
// as aliases for the mouse axes), wrong_sign_mask, right_sign_mask,
// warmup_epochs, base_lr.
LossConfig load_loss_config(const std::filesystem::path& path);

}  // namespace farp
