#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "welfare/games.hpp"
#include "welfare/learners.hpp"
#include "welfare/welfare_function.hpp"

namespace welfare {

enum class InitScheme {
  kFixed,    // init_x / init_y
  kUniform,  // random, one draw per trial from `distribution`
  kGrid,     // cell-centred init_grid x init_grid lattice (1-D games)
};

std::string_view to_string(InitScheme scheme);
InitScheme parse_init_scheme(std::string_view name);

struct ExperimentConfig {
  std::string game = "PrisonersDilemma";
  GameOptions game_options;
  LearnerConfig learner_x;
  LearnerConfig learner_y;
  WelfareTag welfare_x = WelfareTag::kGreedy;
  WelfareTag welfare_y = WelfareTag::kGreedy;
  int steps = 100;
  int trials = 1;
  InitScheme init = InitScheme::kUniform;
  InitDistribution distribution = InitDistribution::kUniform;
  Strategy init_x;
  Strategy init_y;
  int init_grid = 20;
  std::uint64_t seed = 0;
  int threads = 1;

  /// Throws ConfigError for unknown games, bad learner configs, negative
  /// steps, trials < 1, or fixed inits outside the domain.
  void validate() const;
};

struct TrajectoryRecord {
  std::string game;
  LearnerConfig learner_x;
  LearnerConfig learner_y;
  std::uint64_t seed = 0;
  int trial = 0;
  std::vector<Strategy> x;  // steps + 1 entries
  std::vector<Strategy> y;
  std::vector<double> reward_x;
  std::vector<double> reward_y;
  double wall_seconds = 0.0;  // not serialised unless asked

  std::size_t size() const { return x.size(); }
  bool operator==(const TrajectoryRecord& o) const;
};

/// Stream seeds for one trial: init, learner x, learner y.
struct TrialSeeds {
  std::uint64_t init;
  std::uint64_t x;
  std::uint64_t y;
};
TrialSeeds trial_seeds(std::uint64_t master, int trial);

/// Simulates simultaneous updates from (x0, y0). Both players update from the
/// same pre-step snapshot.
TrajectoryRecord simulate(const Game& game, const LearnerConfig& lx, const LearnerConfig& ly,
                          const WelfareFunction& wx, const WelfareFunction& wy, Strategy x0,
                          Strategy y0, int steps, std::uint64_t seed_x, std::uint64_t seed_y);

/// Initial profile for `trial` under cfg.init (kGrid indexes the lattice).
std::pair<Strategy, Strategy> initial_profile(const ExperimentConfig& cfg, const Game& game,
                                              int trial);

/// Cell-centred lattice of init profiles, row-major in x.
std::vector<std::pair<Strategy, Strategy>> init_grid(const Game& game, int points);

/// First trial only.
TrajectoryRecord run_match(const ExperimentConfig& cfg);
/// cfg.trials trajectories, sorted by trial index.
std::vector<TrajectoryRecord> run_trials(const ExperimentConfig& cfg);
/// One trajectory per init-grid point (init scheme forced to kGrid).
std::vector<TrajectoryRecord> phase_portrait(const ExperimentConfig& cfg);

/// JSON document (schema 1, kind "trajectories").
std::string trajectories_to_json(const std::vector<TrajectoryRecord>& records,
                                 bool include_wall_clock = false);
std::vector<TrajectoryRecord> trajectories_from_json(std::string_view text);

/// Columns: [trial,] step, x..., y..., r_x, r_y. The trial column is written
/// when there is more than one record. Metadata is not carried by CSV.
std::string trajectories_to_csv(const std::vector<TrajectoryRecord>& records);
std::vector<TrajectoryRecord> trajectories_from_csv(std::string_view text);

}  // namespace welfare
