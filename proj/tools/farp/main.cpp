#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "farp/analysis.hpp"
#include "farp/codec.hpp"
#include "farp/eval.hpp"
#include "farp/loss.hpp"
#include "farp/match_store.hpp"
#include "farp/policy.hpp"
#include "farp/sampler.hpp"
#include "farp/synthetic.hpp"

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 1337;

std::string default_store_dir() {
  const char* env = std::getenv("FARP_STORE");
  return env ? env : "";
}

farp::Replay load_trimmed(const std::string& file, std::uint32_t trim_start) {
  farp::Replay replay = farp::read_replay_file(file);
  if (trim_start > 0) {
    if (trim_start >= replay.frames.size()) {
      throw std::runtime_error(file + ": trim of " + std::to_string(trim_start) +
                               " frames leaves no data");
    }
    replay.frames.erase(replay.frames.begin(), replay.frames.begin() + trim_start);
  }
  return replay;
}

// --- ingest ------------------------------------------------------------------

int cmd_ingest(const std::vector<std::string>& files, const std::string& store_dir,
               std::uint32_t trim_start) {
  farp::MatchStore store = farp::MatchStore::open(store_dir);

  struct Ingested {
    std::string file;
    farp::Replay replay;
  };
  std::map<std::string, std::vector<Ingested>> by_match;
  for (const std::string& file : files) {
    farp::Replay replay = load_trimmed(file, trim_start);
    by_match[replay.match_id].push_back({file, std::move(replay)});
  }

  std::size_t new_matches = 0, new_results = 0;
  for (auto& [match_id, entries] : by_match) {
    if (store.find_match(match_id) == nullptr) {
      farp::MatchRecord match;
      match.match_id = match_id;
      match.config_name = "unknown";
      match.map_name = "unknown";
      match.played_at = 0;
      match.player_count = static_cast<std::uint32_t>(entries.size());
      for (const Ingested& e : entries) {
        match.duration_s = std::max(match.duration_s, e.replay.duration_seconds());
      }
      match.replay_file = entries.front().file;
      store.record_match(match);
      ++new_matches;
    }

    // winner: strictly highest final kill count in this batch, if any
    const Ingested* winner = nullptr;
    bool tie = false;
    for (const Ingested& e : entries) {
      if (winner == nullptr ||
          e.replay.frames.back().kills > winner->replay.frames.back().kills) {
        winner = &e;
        tie = false;
      } else if (e.replay.frames.back().kills == winner->replay.frames.back().kills) {
        tie = true;
      }
    }

    for (const Ingested& e : entries) {
      if (store.find_result(match_id, e.replay.player_id) != nullptr) {
        throw std::runtime_error("result for player " + e.replay.player_id +
                                 " in match " + match_id + " already ingested");
      }
      const farp::FrameRecord& last = e.replay.frames.back();
      farp::PlayerResult result;
      result.match_id = match_id;
      result.player_id = e.replay.player_id;
      result.kills = last.kills;
      result.deaths = last.deaths;
      result.damage = last.damage;
      result.won = !tie && winner == &e;
      store.record_player_result(result);
      ++new_results;
      std::cout << "ingested " << e.file << ": match=" << match_id
                << " player=" << e.replay.player_id
                << " frames=" << e.replay.frames.size() << '\n';
    }
  }
  std::cout << "store " << store_dir << ": +" << new_matches << " matches, +"
            << new_results << " results\n";
  return 0;
}

// --- stats -------------------------------------------------------------------

int cmd_stats(const std::string& store_dir, const std::string& metric_name) {
  farp::MatchStore store = farp::MatchStore::open(store_dir);
  const auto metric = farp::rank_metric_from_name(metric_name);
  if (!metric) throw std::runtime_error("unknown rank metric: " + metric_name);

  std::cout << "player_id,mean_kills,mean_deaths,kd_ratio,win_rate,matches_played\n";
  for (const farp::PlayerSummary& s : store.rank_players(*metric)) {
    std::cout << s.player_id << ',' << s.mean_kills << ',' << s.mean_deaths << ','
              << s.kd_ratio << ',' << s.win_rate << ',' << s.matches_played << '\n';
  }
  return 0;
}

// --- sample ------------------------------------------------------------------

int cmd_sample(const std::string& file, std::size_t t, const farp::SamplerConfig& cfg,
               std::uint64_t seed) {
  const farp::Replay replay = farp::read_replay_file(file);
  std::mt19937_64 rng(seed);
  const farp::SequenceSample sample = farp::build_sequence(replay, t, cfg, &rng);

  json target;
  for (std::size_t a = 0; a < farp::kActionCount; ++a) {
    target[std::string(farp::kActionNames[a])] = sample.target[a];
  }
  json out{{"frame_indices", sample.frame_indices},
           {"target", target},
           {"channel_spec",
            {{"channels", sample.channel_spec.channels},
             {"width", sample.channel_spec.width},
             {"height", sample.channel_spec.height}}}};
  std::cout << out.dump() << '\n';
  return 0;
}

// --- train-demo ----------------------------------------------------------------

int cmd_train_demo(std::uint32_t steps, std::uint64_t seed, bool plain_mse) {
  farp::DemoConfig cfg;
  cfg.steps = steps;
  cfg.seed = seed;
  cfg.plain_mse = plain_mse;
  const farp::DemoResult result = farp::run_training_demo(cfg);

  std::cout << "step,loss\n";
  const std::size_t stride = std::max<std::size_t>(1, result.loss_curve.size() / 20);
  for (std::size_t i = 0; i < result.loss_curve.size(); i += stride) {
    std::cout << i << ',' << result.loss_curve[i] << '\n';
  }
  if (!result.loss_curve.empty()) {
    std::cout << result.loss_curve.size() - 1 << ',' << result.loss_curve.back()
              << '\n';
  }

  json summary{{"initial_loss", result.initial_loss},
               {"final_loss", result.final_loss},
               {"loss_ratio", result.final_loss / result.initial_loss},
               {"sign_agreement", result.sign_agreement},
               {"plain_mse", plain_mse}};
  std::cout << summary.dump() << '\n';
  return 0;
}

// --- analyze -----------------------------------------------------------------

farp::OccupancyGrid grid_from_replay(const farp::Replay& replay, double cell_size,
                                     double mask_threshold) {
  std::vector<std::pair<double, double>> positions;
  positions.reserve(replay.frames.size());
  double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  bool first = true;
  for (const farp::FrameRecord& f : replay.frames) {
    positions.emplace_back(f.pos_x, f.pos_y);
    if (first) {
      min_x = max_x = f.pos_x;
      min_y = max_y = f.pos_y;
      first = false;
    } else {
      min_x = std::min<double>(min_x, f.pos_x);
      max_x = std::max<double>(max_x, f.pos_x);
      min_y = std::min<double>(min_y, f.pos_y);
      max_y = std::max<double>(max_y, f.pos_y);
    }
  }
  const auto cells = [cell_size](double lo, double hi) {
    return static_cast<std::uint32_t>(std::floor((hi - lo) / cell_size)) + 1;
  };
  return farp::occupancy_heatmap(positions, min_x, min_y, cell_size,
                                 cells(min_x, max_x), cells(min_y, max_y),
                                 mask_threshold);
}

int cmd_analyze(const std::string& file, const std::string& heatmap_out, int order,
                const std::string& hist_out, double cell_size, double mask_threshold,
                const std::string& axis_name) {
  const farp::Replay replay = farp::read_replay_file(file);
  const farp::CameraAxis axis =
      axis_name == "look" ? farp::CameraAxis::look : farp::CameraAxis::turn;

  if (!heatmap_out.empty()) {
    const farp::OccupancyGrid grid = grid_from_replay(replay, cell_size, mask_threshold);
    farp::write_grid_csv(heatmap_out, grid);
    std::cout << "wrote " << heatmap_out << " (" << grid.width << 'x' << grid.height
              << " cells, " << grid.out_of_bounds << " out of bounds)\n";
  }
  if (!hist_out.empty()) {
    const farp::EmpiricalDistribution dist = farp::camera_series(replay, order, axis);
    farp::write_histogram_csv(hist_out, farp::default_camera_histogram(dist));
    std::cout << "wrote " << hist_out << " (order " << order << ", "
              << dist.samples.size() << " samples)\n";
  }
  return 0;
}

// --- compare -----------------------------------------------------------------

int cmd_compare(const std::string& file_a, const std::string& file_b, int order) {
  const farp::Replay a = farp::read_replay_file(file_a);
  const farp::Replay b = farp::read_replay_file(file_b);
  const double distance = farp::wasserstein1(farp::camera_series(a, order),
                                             farp::camera_series(b, order));
  std::cout << json{{"order", order}, {"wasserstein1", distance}}.dump() << '\n';
  return 0;
}

// --- report ------------------------------------------------------------------

int cmd_report(const std::string& store_dir, const std::string& out_dir,
               const std::string& outline_file, double cell_size,
               double mask_threshold) {
  farp::MatchStore store = farp::MatchStore::open(store_dir);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path out(out_dir);

  std::vector<farp::Polyline> walls;
  if (!outline_file.empty()) walls = farp::read_map_outline(outline_file);

  {
    std::ofstream players(out / "players.csv");
    players << "player_id,mean_kills,mean_deaths,kd_ratio,win_rate,matches_played\n";
    for (const farp::PlayerSummary& s : store.rank_players(farp::RankMetric::win_rate)) {
      players << s.player_id << ',' << s.mean_kills << ',' << s.mean_deaths << ','
              << s.kd_ratio << ',' << s.win_rate << ',' << s.matches_played << '\n';
    }
    std::cout << "wrote " << (out / "players.csv").string() << '\n';
  }
  {
    std::ofstream matches(out / "matches.csv");
    matches << "match_id,config_name,map_name,played_at,player_count,duration_s,"
               "replay_file\n";
    for (const farp::MatchRecord& m : store.matches()) {
      matches << m.match_id << ',' << m.config_name << ',' << m.map_name << ','
              << m.played_at << ',' << m.player_count << ',' << m.duration_s << ','
              << m.replay_file << '\n';
    }
    std::cout << "wrote " << (out / "matches.csv").string() << '\n';
  }

  for (const farp::MatchRecord& m : store.matches()) {
    if (m.replay_file.empty() || !std::filesystem::exists(m.replay_file)) continue;
    const farp::Replay replay = farp::read_replay_file(m.replay_file);
    const farp::OccupancyGrid grid = grid_from_replay(replay, cell_size, mask_threshold);
    const std::filesystem::path svg = out / ("heatmap_" + m.match_id + ".svg");
    farp::write_heatmap_svg(svg, grid, walls);
    std::cout << "wrote " << svg.string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frame-action replay pipeline: dataset statistics, sequence "
               "sampling, surrogate training, and behavioural analysis"};
  app.require_subcommand(1);

  // ingest
  std::vector<std::string> ingest_files;
  std::string ingest_store = default_store_dir();
  std::uint32_t trim_start = 0;
  CLI::App* ingest = app.add_subcommand("ingest", "load .farp replays into a store");
  ingest->add_option("files", ingest_files, "replay files")->required();
  auto* ingest_store_opt =
      ingest->add_option("--store", ingest_store, "store directory (env FARP_STORE)");
  if (ingest_store.empty()) ingest_store_opt->required();
  ingest->add_option("--trim-start", trim_start,
                     "drop this many start-up frames from each replay");

  // stats
  std::string stats_store = default_store_dir();
  std::string stats_metric = "win_rate";
  CLI::App* stats = app.add_subcommand("stats", "ranked per-player statistics");
  auto* stats_store_opt =
      stats->add_option("--store", stats_store, "store directory (env FARP_STORE)");
  if (stats_store.empty()) stats_store_opt->required();
  stats->add_option("--rank", stats_metric, "win_rate|kd_ratio|mean_kills")
      ->check(CLI::IsMember({"win_rate", "kd_ratio", "mean_kills"}));

  // sample
  std::string sample_file;
  std::size_t sample_t = 0;
  std::string sample_config;
  std::uint64_t sample_seed = kDefaultSeed;
  farp::SamplerConfig sampler_cfg;
  double sample_lambda = sampler_cfg.skip_exponent;
  std::uint32_t sample_n = sampler_cfg.sequence_length;
  std::uint32_t sample_l = sampler_cfg.target_range;
  CLI::App* sample = app.add_subcommand("sample", "dump one training sequence");
  sample->add_option("file", sample_file, "replay file")->required();
  sample->add_option("-t,--anchor", sample_t, "anchor frame index")->required();
  sample->add_option("-N,--length", sample_n, "sequence length");
  sample->add_option("--lambda", sample_lambda, "frame-skip exponent");
  sample->add_option("-L,--target-range", sample_l, "target averaging range");
  sample->add_option("--config", sample_config, "JSON config with sampler overrides");
  sample->add_option("--seed", sample_seed, "rng seed (one_random target method)");

  // train-demo
  std::uint32_t demo_steps = 500;
  std::uint64_t demo_seed = 7;
  bool demo_plain = false;
  CLI::App* demo = app.add_subcommand(
      "train-demo", "train the surrogate policy on the synthetic task");
  demo->add_option("--steps", demo_steps, "gradient steps");
  demo->add_option("--seed", demo_seed, "rng seed");
  demo->add_flag("--mse-plain", demo_plain, "disable the sign mask (ablation)");

  // analyze
  std::string an_file, an_heatmap, an_hist, an_axis = "turn";
  int an_order = 1;
  double an_cell = 32.0, an_mask = 0.005;
  CLI::App* analyze =
      app.add_subcommand("analyze", "spatial heatmap and camera histograms");
  analyze->add_option("file", an_file, "replay file")->required();
  analyze->add_option("--heatmap", an_heatmap, "write occupancy grid CSV here");
  analyze->add_option("--order", an_order, "camera derivative order 1|2|3")
      ->check(CLI::Range(1, 3));
  analyze->add_option("--hist", an_hist, "write camera histogram CSV here");
  analyze->add_option("--cell-size", an_cell, "heatmap cell size in map units");
  analyze->add_option("--mask-threshold", an_mask,
                      "mask cells below this fraction of the max count");
  analyze->add_option("--axis", an_axis, "turn|look")
      ->check(CLI::IsMember({"turn", "look"}));

  // compare
  std::string cmp_a, cmp_b;
  int cmp_order = 1;
  CLI::App* compare =
      app.add_subcommand("compare", "Wasserstein distance between camera series");
  compare->add_option("a", cmp_a, "first replay")->required();
  compare->add_option("b", cmp_b, "second replay")->required();
  compare->add_option("--order", cmp_order, "camera derivative order 1|2|3")
      ->check(CLI::Range(1, 3));

  // report
  std::string rep_store = default_store_dir(), rep_out, rep_outline;
  double rep_cell = 32.0, rep_mask = 0.005;
  CLI::App* report = app.add_subcommand("report", "CSV tables and SVG heatmaps");
  auto* rep_store_opt =
      report->add_option("--store", rep_store, "store directory (env FARP_STORE)");
  if (rep_store.empty()) rep_store_opt->required();
  report->add_option("--out", rep_out, "output directory")->required();
  report->add_option("--outline", rep_outline, "map outline file for SVG overlays");
  report->add_option("--cell-size", rep_cell, "heatmap cell size in map units");
  report->add_option("--mask-threshold", rep_mask,
                     "mask cells below this fraction of the max count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*ingest) return cmd_ingest(ingest_files, ingest_store, trim_start);
    if (*stats) return cmd_stats(stats_store, stats_metric);
    if (*sample) {
      if (!sample_config.empty()) sampler_cfg = farp::load_sampler_config(sample_config);
      if (sample->count("-N")) sampler_cfg.sequence_length = sample_n;
      if (sample->count("--lambda")) sampler_cfg.skip_exponent = sample_lambda;
      if (sample->count("-L")) sampler_cfg.target_range = sample_l;
      return cmd_sample(sample_file, sample_t, sampler_cfg, sample_seed);
    }
    if (*demo) return cmd_train_demo(demo_steps, demo_seed, demo_plain);
    if (*analyze)
      return cmd_analyze(an_file, an_heatmap, an_order, an_hist, an_cell, an_mask,
                         an_axis);
    if (*compare) return cmd_compare(cmp_a, cmp_b, cmp_order);
    if (*report) return cmd_report(rep_store, rep_out, rep_outline, rep_cell, rep_mask);
  } catch (const std::exception& e) {
    std::cerr << "farp: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
