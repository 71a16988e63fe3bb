#include "farp/eval.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace farp {

EvalSummary aggregate(std::span<const GameResult> results) {
  if (results.empty()) throw std::invalid_argument("aggregate: no game results");
  EvalSummary s;
  s.n_games = static_cast<std::uint32_t>(results.size());
  for (const GameResult& g : results) {
    s.mean_kills += g.kills;
    s.mean_damage += g.damage;
    s.mean_deaths += g.deaths;
  }
  const double n = static_cast<double>(s.n_games);
  s.mean_kills /= n;
  s.mean_damage /= n;
  s.mean_deaths /= n;
  return s;
}

int compare_summaries(const EvalSummary& a, const EvalSummary& b,
                      PrimaryMetric metric) {
  const double pa = metric == PrimaryMetric::damage ? a.mean_damage : a.mean_kills;
  const double pb = metric == PrimaryMetric::damage ? b.mean_damage : b.mean_kills;
  if (pa != pb) return pa > pb ? 1 : -1;
  if (a.mean_kills != b.mean_kills) return a.mean_kills > b.mean_kills ? 1 : -1;
  if (a.mean_deaths != b.mean_deaths) return a.mean_deaths < b.mean_deaths ? 1 : -1;
  return 0;
}

std::vector<GameResult> read_game_results_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<GameResult> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw std::runtime_error("bad JSON in " + path.string() + " at line " +
                               std::to_string(lineno));
    }
    GameResult g;
    g.kills = j.at("kills").get<std::uint32_t>();
    g.damage = j.at("damage").get<std::uint32_t>();
    g.deaths = j.at("deaths").get<std::uint32_t>();
    if (j.contains("duration_s")) g.duration_s = j.at("duration_s").get<double>();
    out.push_back(g);
  }
  return out;
}

void write_summary_csv(std::ostream& out,
                       std::span<const std::pair<std::string, EvalSummary>> rows) {
  out << "name,mean_kills,mean_damage,mean_deaths,n_games\n";
  for (const auto& [name, s] : rows) {
    out << name << ',' << s.mean_kills << ',' << s.mean_damage << ','
        << s.mean_deaths << ',' << s.n_games << '\n';
  }
}

void write_summary_csv(const std::filesystem::path& path,
                       std::span<const std::pair<std::string, EvalSummary>> rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_summary_csv(out, rows);
}

std::vector<std::pair<std::string, EvalSummary>> read_summary_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) ||
      line != "name,mean_kills,mean_damage,mean_deaths,n_games") {
    throw std::runtime_error("not a summary csv: " + path.string());
  }
  std::vector<std::pair<std::string, EvalSummary>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string name, kills, damage, deaths, games;
    if (!std::getline(cells, name, ',') || !std::getline(cells, kills, ',') ||
        !std::getline(cells, damage, ',') || !std::getline(cells, deaths, ',') ||
        !std::getline(cells, games)) {
      throw std::runtime_error("bad summary row in " + path.string());
    }
    EvalSummary s;
    s.mean_kills = std::stod(kills);
    s.mean_damage = std::stod(damage);
    s.mean_deaths = std::stod(deaths);
    s.n_games = static_cast<std::uint32_t>(std::stoul(games));
    rows.emplace_back(name, s);
  }
  return rows;
}

}  // namespace farp
