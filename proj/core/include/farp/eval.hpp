#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace farp {

struct GameResult {
  std::uint32_t kills = 0;
  std::uint32_t damage = 0;
  std::uint32_t deaths = 0;
  double duration_s = 60.0;
};

struct EvalSummary {
  double mean_kills = 0.0;
  double mean_damage = 0.0;
  double mean_deaths = 0.0;
  std::uint32_t n_games = 0;
};

// Arithmetic means over a non-empty set of games.
EvalSummary aggregate(std::span<const GameResult> results);

enum class PrimaryMetric { damage, kills };

// +1 if a ranks ahead of b, -1 if behind, 0 on a full tie. Primary metric
// descending, then kills descending, then fewer deaths. Deaths stay out of
// the primary ordering; a busy agent dies more without playing worse.
int compare_summaries(const EvalSummary& a, const EvalSummary& b,
                      PrimaryMetric metric);

// Line-delimited JSON objects with kills, damage, deaths and optional
// duration_s.
std::vector<GameResult> read_game_results_jsonl(const std::filesystem::path& path);

void write_summary_csv(std::ostream& out,
                       std::span<const std::pair<std::string, EvalSummary>> rows);
void write_summary_csv(const std::filesystem::path& path,
                       std::span<const std::pair<std::string, EvalSummary>> rows);
std::vector<std::pair<std::string, EvalSummary>> read_summary_csv(
    const std::filesystem::path& path);

}  // namespace farp
