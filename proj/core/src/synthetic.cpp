#include "farp/synthetic.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace farp {

namespace {

std::vector<TrainSample> draw_samples(std::mt19937_64& rng,
                                      const std::vector<std::vector<double>>& dirs,
                                      std::uint32_t feature_dim, std::size_t n,
                                      double mouse_magnitude) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<TrainSample> out(n);
  for (TrainSample& sample : out) {
    sample.features.resize(feature_dim);
    for (double& f : sample.features) f = gauss(rng);
    for (std::size_t a = 0; a < kActionCount; ++a) {
      const double score = std::inner_product(
          dirs[a].begin(), dirs[a].end(), sample.features.begin(), 0.0);
      if (is_mouse_action(static_cast<Action>(a))) {
        sample.target[a] = score > 0.0 ? mouse_magnitude : -mouse_magnitude;
      } else {
        sample.target[a] = score > 0.0 ? 1.0 : 0.0;
      }
    }
  }
  return out;
}

}  // namespace

SyntheticTask make_synthetic_task(const SyntheticTaskConfig& cfg,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // one fixed hyperplane per action
  std::vector<std::vector<double>> dirs(kActionCount);
  for (auto& d : dirs) {
    d.resize(cfg.feature_dim);
    for (double& v : d) v = gauss(rng);
  }

  SyntheticTask task;
  task.train = draw_samples(rng, dirs, cfg.feature_dim, cfg.train_samples,
                            cfg.mouse_magnitude);
  task.heldout = draw_samples(rng, dirs, cfg.feature_dim, cfg.heldout_samples,
                              cfg.mouse_magnitude);
  return task;
}

double mouse_sign_agreement(const SurrogatePolicy& policy,
                            std::span<const TrainSample> samples) {
  if (samples.empty()) return 0.0;
  std::size_t hits = 0;
  for (const TrainSample& sample : samples) {
    const ActionValues pred = policy.forward(sample.features);
    for (Action axis : {Action::mouse_x, Action::mouse_y}) {
      if (value_of(pred, axis) * value_of(sample.target, axis) > 0.0) ++hits;
    }
  }
  return static_cast<double>(hits) / (2.0 * static_cast<double>(samples.size()));
}

DemoResult run_training_demo(const DemoConfig& cfg) {
  const SyntheticTask task = make_synthetic_task(cfg.task, cfg.seed);

  SurrogatePolicy policy(cfg.task.feature_dim, {16}, cfg.seed + 1);

  LossConfig loss_cfg;
  loss_cfg.base_lr = cfg.base_lr;
  loss_cfg.warmup_epochs = cfg.warmup_epochs;
  if (cfg.plain_mse) {
    loss_cfg.wrong_sign_mask = 1.0;  // mask disabled: plain squared error
  }

  DemoResult result;
  result.initial_loss = policy.loss_gradient(task.train, loss_cfg).loss;
  result.loss_curve.reserve(cfg.steps);

  std::mt19937_64 rng(cfg.seed + 2);
  std::vector<std::size_t> order(task.train.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t batch_size =
      std::min<std::size_t>(std::max(1u, cfg.batch_size), task.train.size());
  std::size_t cursor = 0;
  std::vector<TrainSample> batch(batch_size);
  for (std::uint32_t step = 0; step < cfg.steps; ++step) {
    for (std::size_t k = 0; k < batch_size; ++k) {
      if (cursor == order.size()) {
        std::shuffle(order.begin(), order.end(), rng);
        cursor = 0;
      }
      batch[k] = task.train[order[cursor++]];
    }
    result.loss_curve.push_back(train_step(policy, batch, loss_cfg, step));
  }

  result.final_loss = policy.loss_gradient(task.train, loss_cfg).loss;
  result.sign_agreement = mouse_sign_agreement(policy, task.heldout);
  return result;
}

}  // namespace farp
