#include "farp/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace farp {

void SamplerConfig::validate() const {
  if (sequence_length < 2) {
    throw std::invalid_argument("sequence_length must be >= 2");
  }
  if (!(skip_exponent >= 1.0 && skip_exponent <= 1.5)) {
    throw std::invalid_argument("skip_exponent must lie in [1.0, 1.5]");
  }
  if (target_range == 0) {
    throw std::invalid_argument("target_range must be positive");
  }
}

std::vector<std::uint32_t> frame_offsets(std::uint32_t n, double lambda) {
  if (n < 2) throw std::invalid_argument("frame_offsets: n must be >= 2");
  if (!(lambda >= 1.0 && lambda <= 1.5)) {
    throw std::invalid_argument("frame_offsets: lambda must lie in [1.0, 1.5]");
  }
  std::vector<std::uint32_t> offsets(n - 1);
  for (std::uint32_t i = 1; i < n; ++i) {
    offsets[i - 1] = static_cast<std::uint32_t>(
        std::floor(std::pow(static_cast<double>(i), lambda)));
  }
  return offsets;
}

ActionValues average_target(std::span<const ActionVector> labels, std::size_t t,
                            std::uint32_t range) {
  if (range == 0) throw std::invalid_argument("average_target: range must be positive");
  if (t + range >= labels.size()) {
    throw std::out_of_range("average_target: window [t+1, t+" + std::to_string(range) +
                            "] exceeds " + std::to_string(labels.size()) + " labels");
  }
  ActionValues sum{};
  for (std::uint32_t n = 1; n <= range; ++n) {
    const ActionValues v = labels[t + n].as_values();
    for (std::size_t a = 0; a < kActionCount; ++a) sum[a] += v[a];
  }
  for (double& v : sum) v /= static_cast<double>(range);
  return sum;
}

SequenceSample build_sequence(const Replay& replay, std::size_t t,
                              const SamplerConfig& cfg, std::mt19937_64* rng) {
  cfg.validate();
  if (t + cfg.target_range >= replay.frames.size()) {
    throw std::out_of_range(
        "build_sequence: anchor " + std::to_string(t) + " leaves no room for a " +
        std::to_string(cfg.target_range) + "-frame target window in " +
        std::to_string(replay.frames.size()) + " frames");
  }

  SequenceSample sample;
  const std::vector<std::uint32_t> offsets =
      frame_offsets(cfg.sequence_length, cfg.skip_exponent);
  sample.frame_indices.resize(cfg.sequence_length);
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    // offsets are ascending; fill oldest-first
    const std::uint32_t offset = offsets[offsets.size() - 1 - k];
    sample.frame_indices[k] =
        offset > t ? 0u : static_cast<std::uint32_t>(t - offset);
  }
  sample.frame_indices.back() = static_cast<std::uint32_t>(t);

  std::vector<ActionVector> labels;
  labels.reserve(replay.frames.size());
  for (const FrameRecord& f : replay.frames) labels.push_back(f.action);

  switch (cfg.target_method) {
    case TargetMethod::average:
      sample.target = average_target(labels, t, cfg.target_range);
      break;
    case TargetMethod::one_next:
      sample.target = labels[t + 1].as_values();
      break;
    case TargetMethod::one_random: {
      if (rng == nullptr) {
        throw std::invalid_argument("build_sequence: one_random needs an rng");
      }
      std::uniform_int_distribution<std::uint32_t> pick(1, cfg.target_range);
      sample.target = labels[t + pick(*rng)].as_values();
      break;
    }
  }
  return sample;
}

std::vector<SequenceSample> build_all_sequences(const Replay& replay,
                                                const SamplerConfig& cfg,
                                                std::mt19937_64* rng) {
  cfg.validate();
  std::vector<SequenceSample> out;
  if (replay.frames.size() <= cfg.target_range) return out;
  const std::size_t last_anchor = replay.frames.size() - cfg.target_range - 1;
  out.reserve(last_anchor + 1);
  for (std::size_t t = 0; t <= last_anchor; ++t) {
    out.push_back(build_sequence(replay, t, cfg, rng));
  }
  return out;
}

std::vector<std::vector<std::size_t>> balanced_batches(
    std::span<const SequenceSample> samples, std::size_t batch_size,
    Action key_action, std::uint64_t seed) {
  if (batch_size == 0) throw std::invalid_argument("balanced_batches: empty batch size");

  std::vector<std::size_t> positives, negatives;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double v = value_of(samples[i].target, key_action);
    (v >= 0.5 ? positives : negatives).push_back(i);
  }
  if (positives.empty() || negatives.empty()) {
    throw std::invalid_argument(
        std::string("balanced_batches: need both label classes for ") +
        std::string(action_name(key_action)));
  }

  std::mt19937_64 rng(seed);
  std::shuffle(positives.begin(), positives.end(), rng);
  std::shuffle(negatives.begin(), negatives.end(), rng);

  const std::size_t pos_per_batch = (batch_size + 1) / 2;
  const std::size_t neg_per_batch = batch_size / 2;
  std::size_t n_batches = (positives.size() + pos_per_batch - 1) / pos_per_batch;
  if (neg_per_batch > 0) {
    n_batches = std::max(
        n_batches, (negatives.size() + neg_per_batch - 1) / neg_per_batch);
  }

  std::size_t pos_cursor = 0, neg_cursor = 0;
  auto draw = [&rng](std::vector<std::size_t>& pool, std::size_t& cursor) {
    if (cursor == pool.size()) {
      std::shuffle(pool.begin(), pool.end(), rng);
      cursor = 0;
    }
    return pool[cursor++];
  };

  std::vector<std::vector<std::size_t>> batches(n_batches);
  for (auto& batch : batches) {
    batch.reserve(batch_size);
    for (std::size_t k = 0; k < batch_size; ++k) {
      if (k % 2 == 0) {
        batch.push_back(draw(positives, pos_cursor));
      } else {
        batch.push_back(draw(negatives, neg_cursor));
      }
    }
  }
  return batches;
}

SamplerConfig load_sampler_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  nlohmann::json root = nlohmann::json::parse(in);
  const nlohmann::json& j = root.contains("sampler") ? root.at("sampler") : root;

  SamplerConfig cfg;
  if (j.contains("sequence_length")) cfg.sequence_length = j.at("sequence_length");
  if (j.contains("skip_exponent")) cfg.skip_exponent = j.at("skip_exponent");
  if (j.contains("target_range")) cfg.target_range = j.at("target_range");
  if (j.contains("target_method")) {
    const std::string method = j.at("target_method");
    if (method == "average") {
      cfg.target_method = TargetMethod::average;
    } else if (method == "one_random") {
      cfg.target_method = TargetMethod::one_random;
    } else if (method == "one_next") {
      cfg.target_method = TargetMethod::one_next;
    } else {
      throw std::runtime_error("unknown target_method: " + method);
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace farp
