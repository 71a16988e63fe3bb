#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace farp {

struct MatchRecord {
  std::string match_id;
  std::string config_name;
  std::string map_name;
  std::int64_t played_at = 0;  // unix seconds
  std::uint32_t player_count = 1;
  double duration_s = 0.0;
  std::string replay_file;

  bool operator==(const MatchRecord&) const = default;
};

struct PlayerResult {
  std::string match_id;
  std::string player_id;
  std::uint32_t kills = 0;
  std::uint32_t deaths = 0;
  std::uint32_t damage = 0;
  bool won = false;

  bool operator==(const PlayerResult&) const = default;
};

struct PlayerSummary {
  std::string player_id;
  double mean_kills = 0.0;
  double mean_deaths = 0.0;
  double kd_ratio = 0.0;
  double win_rate = 0.0;  // in [0,1]
  std::uint32_t matches_played = 0;
};

enum class RankMetric { win_rate, kd_ratio, mean_kills };

std::optional<RankMetric> rank_metric_from_name(std::string_view name);

class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Match/player metadata with derived per-player statistics.
//
// Persistence is two append-only line-delimited JSON logs in the store
// directory (`matches.jsonl`, `results.jsonl`), replayed into memory on
// open. Single writer, multiple readers; concurrent writers must be
// serialized by the caller.
class MatchStore {
 public:
  // Opens (creating if needed) the store at `dir` and replays its logs.
  static MatchStore open(const std::filesystem::path& dir);

  // Purely in-memory store, nothing persisted. Used by tests and one-shot
  // aggregations.
  MatchStore() = default;

  void record_match(const MatchRecord& match);
  void record_player_result(const PlayerResult& result);

  const MatchRecord* find_match(const std::string& match_id) const;
  const PlayerResult* find_result(const std::string& match_id,
                                  const std::string& player_id) const;
  std::vector<PlayerResult> results_for_player(const std::string& player_id) const;

  // Arithmetic means over the player's results. kd_ratio is
  // mean_kills / mean_deaths; with zero mean deaths it degrades to
  // mean_kills (deaths treated as 1).
  PlayerSummary player_summary(const std::string& player_id) const;

  // All summarized players, descending by `metric`, ties broken by
  // player_id in lexicographic order.
  std::vector<PlayerSummary> rank_players(RankMetric metric) const;

  std::size_t match_count() const { return matches_.size(); }
  std::size_t result_count() const { return results_.size(); }
  const std::vector<MatchRecord>& matches() const { return matches_; }
  const std::vector<PlayerResult>& results() const { return results_; }
  std::vector<std::string> player_ids() const;

 private:
  void insert_match(const MatchRecord& match);
  void insert_result(const PlayerResult& result);
  void append_line(std::ofstream& out, const std::string& line);

  std::filesystem::path dir_;
  bool persistent_ = false;
  std::ofstream match_log_;
  std::ofstream result_log_;

  std::vector<MatchRecord> matches_;
  std::vector<PlayerResult> results_;
  std::unordered_map<std::string, std::size_t> match_index_;
  std::unordered_map<std::string, std::vector<std::size_t>> results_by_player_;
  std::unordered_map<std::string, std::vector<std::size_t>> results_by_match_;
  std::unordered_map<std::string, bool> match_has_winner_;
};

}  // namespace farp
