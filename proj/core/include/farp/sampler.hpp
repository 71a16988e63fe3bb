#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include "farp/action.hpp"
#include "farp/replay.hpp"

namespace farp {

enum class TargetMethod { average, one_random, one_next };

struct SamplerConfig {
  std::uint32_t sequence_length = 15;  // N
  double skip_exponent = 1.22;         // lambda, in [1.0, 1.5]
  std::uint32_t target_range = 2;      // L
  TargetMethod target_method = TargetMethod::average;

  void validate() const;  // throws std::invalid_argument
};

// Stacked-frame contract: the consumer materializes each history index as a
// 5-channel image (RGB + depth + segmentation label) at 256x192. The
// pipeline itself never touches pixels.
struct ChannelSpec {
  std::uint32_t channels = 5;
  std::uint32_t width = 256;
  std::uint32_t height = 192;

  bool operator==(const ChannelSpec&) const = default;
};

struct SequenceSample {
  std::vector<std::uint32_t> frame_indices;  // oldest -> newest, last == anchor t
  ActionValues target{};                     // averaged label, binaries in [0,1]
  ChannelSpec channel_spec;
};

// History offsets floor(i^lambda) for i = 1..n-1. lambda = 1 means
// consecutive frames; larger lambda spreads old frames out while keeping
// recent ones dense. Duplicates after flooring are kept.
std::vector<std::uint32_t> frame_offsets(std::uint32_t n, double lambda);

// Mean of the next `range` labels after index t, fieldwise. Binary fields
// become fractions; mouse fields are plain means. Requires t + range <
// labels.size().
ActionValues average_target(std::span<const ActionVector> labels, std::size_t t,
                            std::uint32_t range);

// Frame-index window [t - f(N-1), ..., t - f(1), t], clamped at 0, plus the
// target label for t. `rng` is only consulted for TargetMethod::one_random.
SequenceSample build_sequence(const Replay& replay, std::size_t t,
                              const SamplerConfig& cfg,
                              std::mt19937_64* rng = nullptr);

// Every anchor t admitting a full target window.
std::vector<SequenceSample> build_all_sequences(const Replay& replay,
                                                const SamplerConfig& cfg,
                                                std::mt19937_64* rng = nullptr);

// Batches of indices into `samples` where positives and negatives of
// `key_action` (threshold 0.5 on the averaged target) differ by at most one
// per batch. Pools are shuffled with `seed` and reshuffled when exhausted,
// so the minority class repeats. Requires at least one sample on each side.
std::vector<std::vector<std::size_t>> balanced_batches(
    std::span<const SequenceSample> samples, std::size_t batch_size,
    Action key_action, std::uint64_t seed);

// Reads {"sampler": {...}} (or a bare object) with any of
// sequence_length, skip_exponent, target_range, target_method.
SamplerConfig load_sampler_config(const std::filesystem::path& path);

}  // namespace farp
