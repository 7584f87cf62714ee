#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "welfare/games.hpp"
#include "welfare/learners.hpp"
#include "welfare/rng.hpp"
#include "welfare/welfare_function.hpp"

namespace welfare {

enum class OpponentKind {
  kNaive,     // NL learner on its own reward
  kSelfPlay,  // a second WelFuSe agent with its own assignments
  kFrozen,    // never moves from its initial strategy
};

std::string_view to_string(OpponentKind kind);
/// Accepts "nl", "self-play", "frozen". Throws ConfigError otherwise.
OpponentKind parse_opponent(std::string_view name);

struct OpponentSpec {
  OpponentKind kind = OpponentKind::kNaive;
  LearnerConfig learner{.rule = Rule::kNL, .eta = 0.1};  // used by kNaive
};

struct WelfuseConfig {
  std::vector<WelfareTag> welfare_set = {WelfareTag::kGreedy, WelfareTag::kEgalitarian,
                                         WelfareTag::kFairness};
  int episodes = 3;
  int steps = 1000;
  int batch = 100;
  LearnerConfig inner{.rule = Rule::kELOLA, .eta = 0.1, .alpha = 25.0};
  std::uint64_t seed = 0;
  int threads = 1;
  // Fixed reset strategies; drawn from `reset` when unset. The default resets
  // the learner's own coordinates (logits on probability domains).
  InitDistribution reset = InitDistribution::kLogitNormal;
  std::optional<Strategy> init_x;
  std::optional<Strategy> init_y;

  /// Throws ConfigError on an empty welfare set, duplicate tags, or
  /// non-positive episodes/batch; steps may be zero.
  void validate() const;
};

/// One batch index of one episode.
struct BatchOutcome {
  int welfare_x = 0;  // index into the welfare set
  int welfare_y = -1;  // self-play only
  Strategy init_x;
  Strategy init_y;
  Strategy final_x;
  Strategy final_y;
  RewardPair<double> reward;  // at the final joint strategy
};

struct WelfuseHistory {
  std::string game;
  OpponentKind opponent = OpponentKind::kNaive;
  std::vector<WelfareTag> welfare_set;
  WelfuseConfig config;
  std::vector<std::vector<BatchOutcome>> episodes;  // [episode][batch index]

  /// Number of batch indices in `episode` assigned each welfare function.
  std::vector<int> counts(int episode, Player agent = Player::kX) const;
  /// Mean final reward of `agent` in `episode`.
  double mean_reward(int episode, Player agent = Player::kX) const;
};

/// One update of the inner rule with its objective replaced by `wf`.
/// The opponent model inside the rule always ascends the opponent's own reward.
Strategy welfare_os_step(const LearnerConfig& inner, const WelfareFunction& wf,
                         const Game& game, Player self, std::span<const double> own,
                         std::span<const double> opponent, Rng& rng);

/// Welfare functions for a game. Normalised tags pull Stackelberg constants
/// from a grid analysis (1-D games only).
std::vector<WelfareFunction> make_welfare_functions(const Game& game,
                                                    const std::vector<WelfareTag>& tags);

/// Runs one episode for every batch index. `assign_y` is used only in
/// self-play. Initial strategies are derived from (seed, episode, index).
std::vector<BatchOutcome> run_episode(const WelfuseConfig& config, const OpponentSpec& opponent,
                                      const Game& game,
                                      const std::vector<WelfareFunction>& functions,
                                      const std::vector<int>& assign_x,
                                      const std::vector<int>& assign_y, int episode);

/// Posterior-sampling reassignment. For each batch index, every welfare
/// function k with a non-empty usage set draws one index m_k uniformly from
/// it; the index takes the k with the largest rewards[m_k] (lowest k on ties).
std::vector<int> posterior_sampling_update(const std::vector<double>& rewards,
                                           const std::vector<int>& assignments,
                                           int num_functions, Rng& rng);

WelfuseHistory welfuse_run(const WelfuseConfig& config, const OpponentSpec& opponent,
                           const Game& game);

/// JSON document (schema 1, kind "welfuse-history").
std::string to_json(const WelfuseHistory& history);

}  // namespace welfare
