#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "welfare/games.hpp"
#include "welfare/welfare_function.hpp"

namespace welfare {

/// Uniform grid over one strategy coordinate.
class StrategyGrid {
 public:
  /// Throws ConfigError if points < 2 or hi <= lo.
  StrategyGrid(double lo, double hi, int points);

  /// Grid spanning `player`'s (one-dimensional) domain.
  static StrategyGrid for_domain(const Game& game, Player player, int points);

  double operator[](int i) const;
  int size() const { return points_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  int nearest(double v) const;
  std::vector<double> values() const;

 private:
  double lo_;
  double hi_;
  int points_;
};

inline constexpr int kDefaultGridPoints = 1001;
/// Values within this relative distance of the maximum count as tied.
inline constexpr double kArgmaxTieTolerance = 1e-12;
inline constexpr double kNashTolerance = 1e-9;

/// Index of the first element within the tie tolerance of the maximum.
int argmax_first(const std::vector<double>& values);

/// Responder's argmax strategy for each grid point of the other player.
struct BestResponseMap {
  Player responder = Player::kY;
  std::vector<int> index;
  std::vector<double> strategy;
  std::vector<double> reward;
};

/// Solution of an outer argmax over one player's grid (Stackelberg or WE).
struct GridSolution {
  Player player = Player::kX;
  int index = 0;
  double strategy = 0.0;
  int response_index = 0;   // opponent's BR at `index`
  double response = 0.0;
  double objective = 0.0;   // welfare (or own reward) at (strategy, BR)
  RewardPair<double> rewards;  // both rewards at (strategy, BR)
};

enum class NormalizationMode { kShift, kAffine };

/// Grid evaluation of a one-dimensional game with cached reward surfaces,
/// best-response maps, and Stackelberg quantities. Construction evaluates the
/// full surface; everything else is derived from it. Thread-safe for reads.
class GameAnalysis {
 public:
  /// Throws ConfigError for games whose strategies are not one-dimensional.
  explicit GameAnalysis(std::shared_ptr<const Game> game, int points = kDefaultGridPoints,
                        int threads = 1);

  const Game& game() const { return *game_; }
  const StrategyGrid& grid(Player p) const { return p == Player::kX ? grid_x_ : grid_y_; }

  /// Reward of `whose` at (x grid index i, y grid index j).
  double reward(Player whose, int i, int j) const;
  RewardPair<double> rewards(int i, int j) const;

  const BestResponseMap& best_response(Player responder) const;
  GridSolution stackelberg(Player player) const;
  /// (x*, y*) grid indices of the Stackelberg strategy profile.
  std::pair<int, int> stackelberg_profile() const;

  /// Stackelberg baselines and arrogance penalties; computed once and cached.
  const NormalizationConstants& normalization() const;
  double arrogance_penalty(Player player) const;

  /// Builds a welfare function carrying this game's normalisation constants.
  WelfareFunction welfare(WelfareTag tag) const;

  /// argmax over own grid of wf(own, BR(own)), opponent modelled greedily.
  GridSolution welfare_equilibrium(Player player, const WelfareFunction& wf) const;

  RewardPair<double> normalized_rewards(double x, double y, NormalizationMode mode) const;

  /// Neither player gains more than `tol` by deviating on its own grid.
  bool is_nash(int i, int j, double tol = kNashTolerance) const;
  bool is_nash(int i, int j, RewardPair<double> tol) const;

  /// Largest change of `whose` reward when the other player moves one grid
  /// step away from the profile (i, j), doubled. A true equilibrium within one
  /// cell of (i, j) leaves at most this much gain on the grid.
  double resolution_slack(Player whose, int i, int j) const;

  /// Stackelberg profile is a Nash equilibrium up to tol plus grid resolution.
  bool is_coincidental(double tol = kNashTolerance) const;

 private:
  std::shared_ptr<const Game> game_;
  StrategyGrid grid_x_;
  StrategyGrid grid_y_;
  std::vector<double> surface_x_;  // row-major [i * ny + j]
  std::vector<double> surface_y_;
  BestResponseMap br_x_;
  BestResponseMap br_y_;
  mutable std::once_flag norm_once_;
  mutable NormalizationConstants norm_{};
};

// Operation-level entry points. Each builds (or reuses) a GameAnalysis.

BestResponseMap best_response_map(const GameAnalysis& analysis, Player responder);
GridSolution stackelberg_strategy(const GameAnalysis& analysis, Player player);
GridSolution welfare_equilibrium_strategy(const GameAnalysis& analysis, Player player,
                                          const WelfareFunction& wf);
double arrogance_penalty(const GameAnalysis& analysis, Player player);
RewardPair<double> normalized_rewards(const GameAnalysis& analysis, double x, double y,
                                      NormalizationMode mode);
/// Snaps the profile to the nearest grid points.
bool is_nash(const GameAnalysis& analysis, double x, double y, double tol = kNashTolerance);
bool is_coincidental(const GameAnalysis& analysis, double tol = kNashTolerance);

/// Six-panel summary of a welfare-equilibrium profile.
struct WEProfileReport {
  std::string game;
  WelfareTag welfare_x = WelfareTag::kGreedy;
  WelfareTag welfare_y = WelfareTag::kGreedy;
  GridSolution solution_x;
  GridSolution solution_y;
  RewardPair<double> profile_rewards;
  std::vector<double> grid_x;
  std::vector<double> grid_y;
  std::vector<double> br_y_of_x;
  std::vector<double> br_x_of_y;
  // Reward and welfare along each player's grid with the opponent at its BR.
  RewardPair<std::vector<double>> curve_x;
  RewardPair<std::vector<double>> curve_y;
  std::vector<double> welfare_curve_x;
  std::vector<double> welfare_curve_y;
  // Surfaces subsampled with `surface_stride` along both axes.
  int surface_stride = 1;
  std::vector<std::vector<double>> surface_x;
  std::vector<std::vector<double>> surface_y;
};

/// Surfaces are subsampled so that neither axis exceeds this many points.
inline constexpr int kMaxSurfacePoints = 201;

WEProfileReport we_profile_report(const GameAnalysis& analysis, WelfareTag wf_x,
                                  WelfareTag wf_y);
/// JSON document (schema 1, kind "we-report").
std::string to_json(const WEProfileReport& report);

}  // namespace welfare
