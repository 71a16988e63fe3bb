#include "farp/loss.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace farp {

void LossConfig::validate() const {
  for (std::size_t a = 0; a < kActionCount; ++a) {
    if (!(action_weights[a] > 0.0 && action_weights[a] <= 2.0)) {
      throw std::invalid_argument("action weight for " +
                                  std::string(kActionNames[a]) +
                                  " must lie in (0, 2]");
    }
  }
  if (!(wrong_sign_mask < right_sign_mask)) {
    throw std::invalid_argument("wrong_sign_mask must be below right_sign_mask");
  }
  if (warmup_epochs == 0) throw std::invalid_argument("warmup_epochs must be positive");
  if (!(base_lr > 0.0)) throw std::invalid_argument("base_lr must be positive");
}

namespace {

void require_finite(double v, const char* what) {
  if (std::isnan(v)) throw std::invalid_argument(std::string(what) + " is NaN");
}

double masked(double prediction, double label, double wrong, double right) {
  return prediction * label > 0.0 ? right : wrong;
}

LossResult mouse_loss_masked(double prediction, double label, double wrong,
                             double right) {
  require_finite(prediction, "prediction");
  require_finite(label, "label");
  const double mask = masked(prediction, label, wrong, right);
  const double diff = prediction - label;
  return {diff * diff / mask, 2.0 * diff / mask};
}

}  // namespace

double sign_mask(double prediction, double label) {
  require_finite(prediction, "prediction");
  require_finite(label, "label");
  const double agree = prediction * label > 0.0 ? 1.0 : 0.0;
  return (agree + 0.5) / 1.5;
}

LossResult mouse_loss(double prediction, double label) {
  require_finite(prediction, "prediction");
  require_finite(label, "label");
  const double mask = sign_mask(prediction, label);
  const double diff = prediction - label;
  return {diff * diff / mask, 2.0 * diff / mask};
}

LossResult bce_loss(double prediction, double label) {
  require_finite(prediction, "prediction");
  require_finite(label, "label");
  const double p = std::clamp(prediction, kBceEpsilon, 1.0 - kBceEpsilon);
  const double loss = -(label * std::log(p) + (1.0 - label) * std::log1p(-p));
  const double grad = (p - label) / (p * (1.0 - p));
  return {loss, grad};
}

CombinedLoss combined_loss(const ActionValues& predictions,
                           const ActionValues& targets, const LossConfig& cfg) {
  CombinedLoss out;
  for (std::size_t i = 0; i < kActionCount; ++i) {
    const Action a = static_cast<Action>(i);
    const LossResult r =
        is_mouse_action(a)
            ? mouse_loss_masked(predictions[i], targets[i], cfg.wrong_sign_mask,
                                cfg.right_sign_mask)
            : bce_loss(predictions[i], targets[i]);
    out.per_action[i] = cfg.action_weights[i] * r.loss;
    out.dtotal_dprediction[i] = cfg.action_weights[i] * r.dloss_dprediction;
    out.total += out.per_action[i];
  }
  return out;
}

double warmup_lr(std::uint64_t epoch, const LossConfig& cfg) {
  const double ramp = static_cast<double>(epoch) / static_cast<double>(cfg.warmup_epochs);
  return cfg.base_lr * std::min(ramp, 1.0);
}

LossConfig load_loss_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  nlohmann::json root = nlohmann::json::parse(in);
  const nlohmann::json& j = root.contains("loss") ? root.at("loss") : root;

  LossConfig cfg;
  if (j.contains("action_weights")) {
    for (const auto& [key, value] : j.at("action_weights").items()) {
      std::string name = key;
      if (name == "mouse_lr") name = "mouse_x";
      if (name == "mouse_ud") name = "mouse_y";
      const auto action = action_from_name(name);
      if (!action) throw std::runtime_error("unknown action in config: " + key);
      value_of(cfg.action_weights, *action) = value.get<double>();
    }
  }
  if (j.contains("wrong_sign_mask")) cfg.wrong_sign_mask = j.at("wrong_sign_mask");
  if (j.contains("right_sign_mask")) cfg.right_sign_mask = j.at("right_sign_mask");
  if (j.contains("warmup_epochs")) cfg.warmup_epochs = j.at("warmup_epochs");
  if (j.contains("base_lr")) cfg.base_lr = j.at("base_lr");
  cfg.validate();
  return cfg;
}

}  // namespace farp
