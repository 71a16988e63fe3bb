#include "farp/match_store.hpp"

#include <algorithm>

#include "json.hpp"

namespace farp {

using nlohmann::json;

std::optional<RankMetric> rank_metric_from_name(std::string_view name) {
  if (name == "win_rate") return RankMetric::win_rate;
  if (name == "kd_ratio") return RankMetric::kd_ratio;
  if (name == "mean_kills") return RankMetric::mean_kills;
  return std::nullopt;
}

namespace {

json to_json(const MatchRecord& m) {
  return json{{"match_id", m.match_id},       {"config_name", m.config_name},
              {"map_name", m.map_name},       {"played_at", m.played_at},
              {"player_count", m.player_count}, {"duration_s", m.duration_s},
              {"replay_file", m.replay_file}};
}

json to_json(const PlayerResult& r) {
  return json{{"match_id", r.match_id}, {"player_id", r.player_id},
              {"kills", r.kills},       {"deaths", r.deaths},
              {"damage", r.damage},     {"won", r.won ? 1 : 0}};
}

MatchRecord match_from_json(const json& j) {
  MatchRecord m;
  m.match_id = j.at("match_id").get<std::string>();
  m.config_name = j.at("config_name").get<std::string>();
  m.map_name = j.at("map_name").get<std::string>();
  m.played_at = j.at("played_at").get<std::int64_t>();
  m.player_count = j.at("player_count").get<std::uint32_t>();
  m.duration_s = j.at("duration_s").get<double>();
  m.replay_file = j.at("replay_file").get<std::string>();
  return m;
}

PlayerResult result_from_json(const json& j) {
  PlayerResult r;
  r.match_id = j.at("match_id").get<std::string>();
  r.player_id = j.at("player_id").get<std::string>();
  r.kills = j.at("kills").get<std::uint32_t>();
  r.deaths = j.at("deaths").get<std::uint32_t>();
  r.damage = j.at("damage").get<std::uint32_t>();
  const json& won = j.at("won");
  r.won = won.is_boolean() ? won.get<bool>() : won.get<int>() != 0;
  return r;
}

template <typename Fn>
void replay_log(const std::filesystem::path& file, Fn&& per_line) {
  std::ifstream in(file);
  if (!in) return;  // fresh store
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw StoreError("corrupt store log " + file.string() + " at line " +
                       std::to_string(lineno));
    }
    per_line(j);
  }
}

}  // namespace

MatchStore MatchStore::open(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  MatchStore store;
  store.dir_ = dir;

  replay_log(dir / "matches.jsonl",
             [&](const json& j) { store.insert_match(match_from_json(j)); });
  replay_log(dir / "results.jsonl",
             [&](const json& j) { store.insert_result(result_from_json(j)); });

  store.match_log_.open(dir / "matches.jsonl", std::ios::app);
  store.result_log_.open(dir / "results.jsonl", std::ios::app);
  if (!store.match_log_ || !store.result_log_) {
    throw StoreError("cannot open store logs under " + dir.string());
  }
  store.persistent_ = true;
  return store;
}

void MatchStore::insert_match(const MatchRecord& match) {
  if (match_index_.contains(match.match_id)) {
    throw StoreError("duplicate match_id: " + match.match_id);
  }
  match_index_.emplace(match.match_id, matches_.size());
  matches_.push_back(match);
}

void MatchStore::insert_result(const PlayerResult& result) {
  if (!match_index_.contains(result.match_id)) {
    throw StoreError("unknown match_id: " + result.match_id);
  }
  if (result.won) {
    bool& has_winner = match_has_winner_[result.match_id];
    if (has_winner) {
      throw StoreError("second winner recorded for match " + result.match_id);
    }
    has_winner = true;
  }
  results_by_player_[result.player_id].push_back(results_.size());
  results_by_match_[result.match_id].push_back(results_.size());
  results_.push_back(result);
}

void MatchStore::append_line(std::ofstream& out, const std::string& line) {
  out << line << '\n';
  out.flush();
  if (!out) throw StoreError("write to store log failed");
}

void MatchStore::record_match(const MatchRecord& match) {
  insert_match(match);
  if (persistent_) append_line(match_log_, to_json(match).dump());
}

void MatchStore::record_player_result(const PlayerResult& result) {
  insert_result(result);
  if (persistent_) append_line(result_log_, to_json(result).dump());
}

const MatchRecord* MatchStore::find_match(const std::string& match_id) const {
  auto it = match_index_.find(match_id);
  return it == match_index_.end() ? nullptr : &matches_[it->second];
}

const PlayerResult* MatchStore::find_result(const std::string& match_id,
                                            const std::string& player_id) const {
  auto it = results_by_match_.find(match_id);
  if (it == results_by_match_.end()) return nullptr;
  for (std::size_t idx : it->second) {
    if (results_[idx].player_id == player_id) return &results_[idx];
  }
  return nullptr;
}

std::vector<PlayerResult> MatchStore::results_for_player(
    const std::string& player_id) const {
  std::vector<PlayerResult> out;
  auto it = results_by_player_.find(player_id);
  if (it == results_by_player_.end()) return out;
  out.reserve(it->second.size());
  for (std::size_t idx : it->second) out.push_back(results_[idx]);
  return out;
}

PlayerSummary MatchStore::player_summary(const std::string& player_id) const {
  auto it = results_by_player_.find(player_id);
  if (it == results_by_player_.end() || it->second.empty()) {
    throw StoreError("no results for player: " + player_id);
  }
  PlayerSummary s;
  s.player_id = player_id;
  s.matches_played = static_cast<std::uint32_t>(it->second.size());
  double kills = 0.0, deaths = 0.0, wins = 0.0;
  for (std::size_t idx : it->second) {
    kills += results_[idx].kills;
    deaths += results_[idx].deaths;
    wins += results_[idx].won ? 1.0 : 0.0;
  }
  const double n = static_cast<double>(s.matches_played);
  s.mean_kills = kills / n;
  s.mean_deaths = deaths / n;
  s.kd_ratio = s.mean_deaths > 0.0 ? s.mean_kills / s.mean_deaths : s.mean_kills;
  s.win_rate = wins / n;
  return s;
}

std::vector<std::string> MatchStore::player_ids() const {
  std::vector<std::string> ids;
  ids.reserve(results_by_player_.size());
  for (const auto& [id, _] : results_by_player_) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<PlayerSummary> MatchStore::rank_players(RankMetric metric) const {
  const std::vector<std::string> ids = player_ids();
  if (ids.empty()) throw StoreError("rank_players on an empty store");

  std::vector<PlayerSummary> out;
  out.reserve(ids.size());
  for (const std::string& id : ids) out.push_back(player_summary(id));

  auto key = [metric](const PlayerSummary& s) {
    switch (metric) {
      case RankMetric::win_rate: return s.win_rate;
      case RankMetric::kd_ratio: return s.kd_ratio;
      case RankMetric::mean_kills: return s.mean_kills;
    }
    return 0.0;
  };
  std::stable_sort(out.begin(), out.end(),
                   [&](const PlayerSummary& a, const PlayerSummary& b) {
                     if (key(a) != key(b)) return key(a) > key(b);
                     return a.player_id < b.player_id;
                   });
  return out;
}

}  // namespace farp
