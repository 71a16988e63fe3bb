#include "farp/policy.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace farp {

namespace {

std::uint32_t checked_width(std::uint32_t depth, std::uint32_t max_depth,
                            const char* what) {
  if (depth < 1 || depth > max_depth) {
    throw std::out_of_range(std::string(what) + " depth " + std::to_string(depth) +
                            " outside 1.." + std::to_string(max_depth));
  }
  return depth;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

std::uint32_t cnn_width(std::uint32_t depth) {
  checked_width(depth, 5, "cnn");
  return 74u << (depth - 1);
}

std::uint32_t convlstm_width(std::uint32_t depth) {
  checked_width(depth, 4, "convlstm");
  return 9 + 2 * depth;
}

std::uint32_t mlp_width(std::uint32_t depth) {
  checked_width(depth, 5, "mlp");
  return 1984u >> (depth - 1);  // 1984 = 31 * 2^6, exact at every depth
}

std::vector<std::uint32_t> ArchitectureSpec::cnn_widths() const {
  std::vector<std::uint32_t> w;
  for (std::uint32_t d = 1; d <= cnn_depth; ++d) w.push_back(cnn_width(d));
  return w;
}

std::vector<std::uint32_t> ArchitectureSpec::convlstm_widths() const {
  std::vector<std::uint32_t> w;
  for (std::uint32_t d = 1; d <= convlstm_depth; ++d) w.push_back(convlstm_width(d));
  return w;
}

std::vector<std::uint32_t> ArchitectureSpec::mlp_widths() const {
  std::vector<std::uint32_t> w;
  for (std::uint32_t d = 1; d <= mlp_depth; ++d) w.push_back(mlp_width(d));
  return w;
}

// --- SurrogatePolicy ---------------------------------------------------------

namespace {

// Flat layout: per trunk layer W (out x in, row-major) then b(out);
// then per head (Action order) w(trunk_out) then b.
std::size_t trunk_param_count(std::uint32_t input_dim,
                              const std::vector<std::uint32_t>& widths) {
  std::size_t count = 0;
  std::uint32_t in = input_dim;
  for (std::uint32_t out : widths) {
    count += static_cast<std::size_t>(out) * in + out;
    in = out;
  }
  return count;
}

}  // namespace

SurrogatePolicy::SurrogatePolicy(std::uint32_t input_dim,
                                 std::vector<std::uint32_t> trunk_widths,
                                 std::uint64_t seed)
    : input_dim_(input_dim), trunk_widths_(std::move(trunk_widths)) {
  if (input_dim_ == 0) throw std::invalid_argument("input_dim must be positive");
  for (std::uint32_t w : trunk_widths_) {
    if (w == 0) throw std::invalid_argument("trunk widths must be positive");
  }
  const std::uint32_t trunk_out =
      trunk_widths_.empty() ? input_dim_ : trunk_widths_.back();
  params_.resize(trunk_param_count(input_dim_, trunk_widths_) +
                 kActionCount * (static_cast<std::size_t>(trunk_out) + 1));

  std::mt19937_64 rng(seed);
  std::size_t at = 0;
  auto init_layer = [&](std::uint32_t fan_in, std::size_t n) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (std::size_t k = 0; k < n; ++k) params_[at++] = dist(rng);
  };
  std::uint32_t in = input_dim_;
  for (std::uint32_t out : trunk_widths_) {
    init_layer(in, static_cast<std::size_t>(out) * in + out);
    in = out;
  }
  for (std::size_t head = 0; head < kActionCount; ++head) {
    init_layer(trunk_out, static_cast<std::size_t>(trunk_out) + 1);
  }
}

void SurrogatePolicy::set_dropout(double rate, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw std::invalid_argument("dropout rate must lie in [0, 1)");
  }
  dropout_rate_ = rate;
  dropout_rng_.seed(seed);
}

namespace {

struct ForwardTrace {
  // activations[0] is the input, activations[k] the k-th tanh output
  std::vector<std::vector<double>> activations;
  std::array<double, kActionCount> head_pre{};   // pre-activation head outputs
  ActionValues predictions{};
};

ForwardTrace run_forward(std::span<const double> params, std::uint32_t input_dim,
                         const std::vector<std::uint32_t>& widths,
                         std::span<const double> features,
                         const std::vector<std::vector<double>>* dropout_masks) {
  if (features.size() != input_dim) {
    throw std::invalid_argument("feature vector has " + std::to_string(features.size()) +
                                " entries, expected " + std::to_string(input_dim));
  }
  for (double v : features) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite feature");
  }

  ForwardTrace trace;
  trace.activations.emplace_back(features.begin(), features.end());

  std::size_t at = 0;
  for (std::size_t l = 0; l < widths.size(); ++l) {
    const std::vector<double>& in = trace.activations.back();
    const std::uint32_t out_dim = widths[l];
    std::vector<double> out(out_dim);
    for (std::uint32_t o = 0; o < out_dim; ++o) {
      double z = 0.0;
      const double* w = params.data() + at + static_cast<std::size_t>(o) * in.size();
      for (std::size_t k = 0; k < in.size(); ++k) z += w[k] * in[k];
      z += params[at + static_cast<std::size_t>(out_dim) * in.size() + o];
      out[o] = std::tanh(z);
      if (dropout_masks) out[o] *= (*dropout_masks)[l][o];
    }
    at += static_cast<std::size_t>(out_dim) * in.size() + out_dim;
    trace.activations.push_back(std::move(out));
  }

  const std::vector<double>& top = trace.activations.back();
  for (std::size_t head = 0; head < kActionCount; ++head) {
    double z = 0.0;
    const double* w = params.data() + at;
    for (std::size_t k = 0; k < top.size(); ++k) z += w[k] * top[k];
    z += params[at + top.size()];
    at += top.size() + 1;
    trace.head_pre[head] = z;
    const Action a = static_cast<Action>(head);
    trace.predictions[head] = is_mouse_action(a) ? z : sigmoid(z);
  }
  return trace;
}

}  // namespace

ActionValues SurrogatePolicy::forward(std::span<const double> features) const {
  return run_forward(params_, input_dim_, trunk_widths_, features, nullptr)
      .predictions;
}

BatchGradient SurrogatePolicy::loss_gradient(std::span<const TrainSample> batch,
                                             const LossConfig& cfg) const {
  if (batch.empty()) throw std::invalid_argument("empty batch");

  BatchGradient result;
  result.gradient.assign(params_.size(), 0.0);

  const std::uint32_t trunk_out =
      trunk_widths_.empty() ? input_dim_ : trunk_widths_.back();
  const std::size_t heads_at = trunk_param_count(input_dim_, trunk_widths_);

  // One seeded mask per step, shared across the batch.
  std::vector<std::vector<double>> masks;
  const std::vector<std::vector<double>>* masks_ptr = nullptr;
  if (dropout_rate_ > 0.0) {
    std::bernoulli_distribution keep(1.0 - dropout_rate_);
    for (std::uint32_t w : trunk_widths_) {
      std::vector<double> mask(w);
      for (double& m : mask) {
        m = keep(dropout_rng_) ? 1.0 / (1.0 - dropout_rate_) : 0.0;
      }
      masks.push_back(std::move(mask));
    }
    masks_ptr = &masks;
  }

  for (const TrainSample& sample : batch) {
    const ForwardTrace trace =
        run_forward(params_, input_dim_, trunk_widths_, sample.features, masks_ptr);
    const CombinedLoss loss = combined_loss(trace.predictions, sample.target, cfg);
    result.loss += loss.total;

    const std::vector<double>& top = trace.activations.back();
    std::vector<double> delta_top(top.size(), 0.0);

    std::size_t at = heads_at;
    for (std::size_t head = 0; head < kActionCount; ++head) {
      const Action a = static_cast<Action>(head);
      double dldz = loss.dtotal_dprediction[head];
      if (!is_mouse_action(a)) {
        const double p = trace.predictions[head];
        // clamp in bce_loss is flat outside [eps, 1-eps]
        dldz *= (p <= kBceEpsilon || p >= 1.0 - kBceEpsilon) ? 0.0 : p * (1.0 - p);
      }
      for (std::size_t k = 0; k < top.size(); ++k) {
        result.gradient[at + k] += dldz * top[k];
        delta_top[k] += dldz * params_[at + k];
      }
      result.gradient[at + top.size()] += dldz;
      at += top.size() + 1;
    }

    // back through the trunk
    std::vector<double> delta = std::move(delta_top);
    for (std::size_t l = trunk_widths_.size(); l-- > 0;) {
      const std::vector<double>& in = trace.activations[l];
      const std::vector<double>& out = trace.activations[l + 1];
      std::size_t layer_at = 0;
      {
        std::uint32_t dim = input_dim_;
        for (std::size_t m = 0; m < l; ++m) {
          layer_at += static_cast<std::size_t>(trunk_widths_[m]) * dim + trunk_widths_[m];
          dim = trunk_widths_[m];
        }
      }
      std::vector<double> delta_in(in.size(), 0.0);
      for (std::size_t o = 0; o < out.size(); ++o) {
        // out[o] = mask * tanh(z); d(out)/dz = mask * (1 - tanh(z)^2)
        double mask = 1.0;
        double tanh_z = out[o];
        if (masks_ptr) {
          mask = (*masks_ptr)[l][o];
          if (mask == 0.0) {
            continue;
          }
          tanh_z = out[o] / mask;
        }
        const double dz = delta[o] * mask * (1.0 - tanh_z * tanh_z);
        const std::size_t row = layer_at + o * in.size();
        for (std::size_t k = 0; k < in.size(); ++k) {
          result.gradient[row + k] += dz * in[k];
          delta_in[k] += dz * params_[row + k];
        }
        result.gradient[layer_at + out.size() * in.size() + o] += dz;
      }
      delta = std::move(delta_in);
    }
  }

  const double scale = 1.0 / static_cast<double>(batch.size());
  result.loss *= scale;
  for (double& g : result.gradient) g *= scale;
  return result;
}

double train_step(SurrogatePolicy& policy, std::span<const TrainSample> batch,
                  const LossConfig& cfg, std::uint64_t epoch) {
  BatchGradient grad = policy.loss_gradient(batch, cfg);
  const double lr = warmup_lr(epoch, cfg);
  for (std::size_t i = 0; i < policy.params_.size(); ++i) {
    policy.params_[i] -= lr * grad.gradient[i];
  }
  return grad.loss;
}

// --- checkpoints -------------------------------------------------------------

namespace {

constexpr std::uint8_t kCheckpointMagic[4] = {'F', 'P', 'C', 'K'};
constexpr std::uint16_t kCheckpointVersion = 1;

template <typename T>
void write_le(std::ofstream& out, T value) {
  std::uint8_t bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<std::uint8_t>(static_cast<std::uint64_t>(value) >> (8 * i));
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T read_le(std::ifstream& in, const char* what) {
  std::uint8_t bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw std::runtime_error(std::string("truncated checkpoint: ") + what);
  }
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  }
  return static_cast<T>(v);
}

}  // namespace

void SurrogatePolicy::save_checkpoint(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(kCheckpointMagic), 4);
  write_le(out, kCheckpointVersion);
  write_le(out, input_dim_);
  write_le(out, static_cast<std::uint32_t>(trunk_widths_.size()));
  for (std::uint32_t w : trunk_widths_) write_le(out, w);
  write_le(out, static_cast<std::uint64_t>(params_.size()));
  for (double p : params_) {
    const float f = static_cast<float>(p);
    std::uint32_t bits;
    std::memcpy(&bits, &f, sizeof bits);
    write_le(out, bits);
  }
  if (!out) throw std::runtime_error("short write to " + path.string());
}

SurrogatePolicy SurrogatePolicy::load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::uint8_t magic[4];
  if (!in.read(reinterpret_cast<char*>(magic), 4) ||
      std::memcmp(magic, kCheckpointMagic, 4) != 0) {
    throw std::runtime_error("not a policy checkpoint: " + path.string());
  }
  const std::uint16_t version = read_le<std::uint16_t>(in, "version");
  if (version != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  }
  const std::uint32_t input_dim = read_le<std::uint32_t>(in, "input_dim");
  const std::uint32_t n_trunk = read_le<std::uint32_t>(in, "trunk size");
  std::vector<std::uint32_t> widths(n_trunk);
  for (std::uint32_t& w : widths) w = read_le<std::uint32_t>(in, "trunk width");

  SurrogatePolicy policy(input_dim, widths, /*seed=*/0);
  const std::uint64_t count = read_le<std::uint64_t>(in, "parameter count");
  if (count != policy.params_.size()) {
    throw std::runtime_error("checkpoint parameter count mismatch");
  }
  for (double& p : policy.params_) {
    const std::uint32_t bits = read_le<std::uint32_t>(in, "parameter");
    float f;
    std::memcpy(&f, &bits, sizeof f);
    p = static_cast<double>(f);
  }
  return policy;
}

}  // namespace farp
