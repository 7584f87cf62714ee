#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "welfare/games.hpp"
#include "welfare/rng.hpp"
#include "welfare/welfare_function.hpp"

namespace welfare {

enum class Rule { kNL, kLookAhead, kELOLA, kLOLA, kShepherd, kSaGa, kSaSa };

/// Lower-case names: nl, lookahead, elola, lola, shepherd, saga, sasa.
std::string_view to_string(Rule rule);
/// Throws ConfigError for unknown names.
Rule parse_rule(std::string_view name);
std::vector<std::string> rule_names();

/// Coordinates a learner takes its steps in. kClip steps in strategy space
/// and clamps to the bounds; kLogit steps in the logit of the position within
/// each interval; kAuto picks kLogit for probability domains ([0, 1] in every
/// coordinate) and kClip otherwise. Both keep emitted strategies in bounds.
enum class Parametrization { kAuto, kClip, kLogit };

std::string_view to_string(Parametrization p);
Parametrization parse_parametrization(std::string_view name);

struct LearnerConfig {
  Rule rule = Rule::kNL;
  double eta = 0.1;
  double alpha = 0.0;
  double sigma = 1.0;
  int n_samples = 1;
  int m_samples = 1;
  int inner_steps = 1;
  bool unroll_gradient = true;
  Parametrization parametrization = Parametrization::kAuto;

  /// Throws ConfigError unless eta > 0, alpha >= 0, sigma >= 0, N, M, k >= 1.
  void validate() const;
};

/// Coordinatewise clamp to the domain. Throws ConfigError on dimension mismatch.
Strategy project(std::span<const double> s, const Domain& domain);

/// Latent values are clamped to this magnitude in logit coordinates.
inline constexpr double kLatentLimit = 40.0;

bool uses_logit(Parametrization p, const Domain& domain);
/// Strategy -> learner coordinates (identity under clipping).
Strategy to_latent(std::span<const double> s, const Domain& domain, Parametrization p);
/// Learner coordinates -> strategy (clamp under clipping, scaled logistic otherwise).
Strategy from_latent(std::span<const double> u, const Domain& domain, Parametrization p);

/// Random initial strategies. kUniform is uniform in the box. kLogitNormal
/// draws logit coordinates (see uses_logit) as standard normals in learner
/// coordinates and clipped coordinates uniformly.
enum class InitDistribution { kUniform, kLogitNormal };

std::string_view to_string(InitDistribution d);
InitDistribution parse_init_distribution(std::string_view name);

Strategy random_strategy(const Domain& domain, Parametrization p, InitDistribution d, Rng& rng);

/// Everything an update needs besides its random stream.
struct UpdateContext {
  const Game& game;
  Player self;
  std::span<const double> own;
  std::span<const double> opponent;
  const WelfareFunction& welfare;
};

// Deterministic rules. Each returns the projected next strategy of `self`.
Strategy nl_update(const LearnerConfig& cfg, const UpdateContext& ctx);
Strategy lookahead_update(const LearnerConfig& cfg, const UpdateContext& ctx);
Strategy elola_update(const LearnerConfig& cfg, const UpdateContext& ctx);
Strategy lola_update(const LearnerConfig& cfg, const UpdateContext& ctx);
Strategy shepherd_update(const LearnerConfig& cfg, const UpdateContext& ctx);

// Sampling rules. Draw order: SaGa draws N opponent perturbations; SaSa draws,
// for each m, one own perturbation followed by N opponent perturbations.
Strategy saga_update(const LearnerConfig& cfg, const UpdateContext& ctx, Rng& rng);
Strategy sasa_update(const LearnerConfig& cfg, const UpdateContext& ctx, Rng& rng);

/// Dispatches on cfg.rule.
Strategy update(const LearnerConfig& cfg, const UpdateContext& ctx, Rng& rng);

/// Sampled opponent best response: projected candidates and the argmax
/// (first maximum) of the opponent's own reward against `own`.
struct SampledResponse {
  std::vector<Strategy> candidates;
  std::vector<double> values;
  int best = 0;
  const Strategy& response() const { return candidates[static_cast<std::size_t>(best)]; }
};
SampledResponse sample_response(const LearnerConfig& cfg, const Game& game, Player self,
                                std::span<const double> own, std::span<const double> opponent,
                                Rng& rng);

/// Full SaSa candidate table for one step.
struct SasaSelection {
  std::vector<Strategy> own_candidates;      // M entries
  std::vector<Strategy> own_latent;          // the same, in learner coordinates
  std::vector<SampledResponse> responses;    // M entries, N candidates each
  std::vector<double> values;                // welfare at (own_m, response_m)
  int best = 0;
};
SasaSelection sasa_select(const LearnerConfig& cfg, const UpdateContext& ctx, Rng& rng);

/// Scalar objective a gradient rule ascends, as a function of the own
/// learner coordinates `at` (see to_latent), with everything frozen that the
/// rule freezes at ctx.own / ctx.opponent. For SaGa the sampled response
/// (a strategy) must be passed explicitly.
double objective_value(const LearnerConfig& cfg, const UpdateContext& ctx,
                       std::span<const double> at,
                       std::span<const double> sampled_response = {});
/// Exact gradient of objective_value with respect to `at`.
Strategy objective_gradient(const LearnerConfig& cfg, const UpdateContext& ctx,
                            std::span<const double> at,
                            std::span<const double> sampled_response = {});

/// One-step lookahead of the greedy opponent, taken in the opponent's
/// learner coordinates under cfg.parametrization; returns a strategy.
Strategy opponent_lookahead(const LearnerConfig& cfg, const Game& game, Player self,
                            std::span<const double> own, std::span<const double> opponent);

/// A learner with its own strategy and random stream.
class LearnerState {
 public:
  /// Validates the config and projects nothing: the initial strategy must lie
  /// in the domain of the player it is used for.
  LearnerState(LearnerConfig config, Strategy initial, std::uint64_t seed);

  const LearnerConfig& config() const { return config_; }
  const Strategy& strategy() const { return strategy_; }
  void set_strategy(Strategy s) { strategy_ = std::move(s); }
  Rng& rng() { return rng_; }

  /// Next strategy against `opponent`; does not commit it.
  Strategy propose(const Game& game, Player self, std::span<const double> opponent,
                   const WelfareFunction& wf = WelfareFunction::greedy());

 private:
  LearnerConfig config_;
  Strategy strategy_;
  Rng rng_;
};

}  // namespace welfare
