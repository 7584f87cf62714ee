#include "welfare/welfuse.hpp"

#include <algorithm>
#include <memory>
#include <random>

#include "json.hpp"
#include "welfare/equilibria.hpp"
#include "welfare/parallel.hpp"

namespace welfare {

namespace {

std::vector<int> uniform_assignments(int batch, int num_functions, Rng& rng) {
  std::uniform_int_distribution<int> pick(0, num_functions - 1);
  std::vector<int> out(static_cast<std::size_t>(batch));
  for (int& a : out) a = pick(rng);
  return out;
}

std::uint64_t agent_label(Player p) {
  return p == Player::kX ? kStreamLearnerX : kStreamLearnerY;
}

}  // namespace

std::string_view to_string(OpponentKind kind) {
  switch (kind) {
    case OpponentKind::kNaive:
      return "nl";
    case OpponentKind::kSelfPlay:
      return "self-play";
    case OpponentKind::kFrozen:
      return "frozen";
  }
  return "nl";
}

OpponentKind parse_opponent(std::string_view name) {
  if (name == "nl") return OpponentKind::kNaive;
  if (name == "self-play") return OpponentKind::kSelfPlay;
  if (name == "frozen") return OpponentKind::kFrozen;
  throw ConfigError("unknown opponent: " + std::string(name));
}

void WelfuseConfig::validate() const {
  if (welfare_set.empty()) throw ConfigError("welfare set is empty");
  for (std::size_t i = 0; i < welfare_set.size(); ++i) {
    for (std::size_t j = i + 1; j < welfare_set.size(); ++j) {
      if (welfare_set[i] == welfare_set[j]) throw ConfigError("duplicate welfare function");
    }
  }
  if (episodes < 1) throw ConfigError("episodes must be at least 1");
  if (steps < 0) throw ConfigError("steps must be non-negative");
  if (batch < 1) throw ConfigError("batch must be at least 1");
  inner.validate();
}

std::vector<int> WelfuseHistory::counts(int episode, Player agent) const {
  std::vector<int> out(welfare_set.size(), 0);
  for (const BatchOutcome& b : episodes.at(static_cast<std::size_t>(episode))) {
    const int k = agent == Player::kX ? b.welfare_x : b.welfare_y;
    if (k >= 0) ++out[static_cast<std::size_t>(k)];
  }
  return out;
}

double WelfuseHistory::mean_reward(int episode, Player agent) const {
  const auto& ep = episodes.at(static_cast<std::size_t>(episode));
  double sum = 0.0;
  for (const BatchOutcome& b : ep) sum += b.reward.of(agent);
  return sum / static_cast<double>(ep.size());
}

Strategy welfare_os_step(const LearnerConfig& inner, const WelfareFunction& wf,
                         const Game& game, Player self, std::span<const double> own,
                         std::span<const double> opponent, Rng& rng) {
  const UpdateContext ctx{game, self, own, opponent, wf};
  return update(inner, ctx, rng);
}

std::vector<WelfareFunction> make_welfare_functions(const Game& game,
                                                    const std::vector<WelfareTag>& tags) {
  std::unique_ptr<GameAnalysis> analysis;
  std::vector<WelfareFunction> out;
  for (WelfareTag tag : tags) {
    if (!is_normalized(tag)) {
      out.push_back(WelfareFunction::make(tag));
      continue;
    }
    if (!analysis) {
      // Non-owning alias: the analysis does not outlive this call.
      analysis = std::make_unique<GameAnalysis>(
          std::shared_ptr<const Game>(std::shared_ptr<const Game>(), &game));
    }
    out.push_back(analysis->welfare(tag));
  }
  return out;
}

std::vector<BatchOutcome> run_episode(const WelfuseConfig& config, const OpponentSpec& opponent,
                                      const Game& game,
                                      const std::vector<WelfareFunction>& functions,
                                      const std::vector<int>& assign_x,
                                      const std::vector<int>& assign_y, int episode) {
  const bool self_play = opponent.kind == OpponentKind::kSelfPlay;
  if (assign_x.size() != static_cast<std::size_t>(config.batch) ||
      (self_play && assign_y.size() != assign_x.size())) {
    throw ConfigError("assignment count does not match batch size");
  }
  const WelfareFunction greedy = WelfareFunction::greedy();
  std::vector<BatchOutcome> out(static_cast<std::size_t>(config.batch));
  const auto ep = static_cast<std::uint64_t>(episode);

  parallel_for(out.size(), config.threads, [&](std::size_t j) {
    BatchOutcome& b = out[j];
    const LearnerConfig& cfg_y = self_play ? config.inner : opponent.learner;
    Rng init_rng(derive_seed(config.seed, {kStreamInit, ep, j}));
    b.init_x = config.init_x ? *config.init_x
                             : random_strategy(game.domain(Player::kX),
                                               config.inner.parametrization,
                                               config.reset, init_rng);
    b.init_y = config.init_y ? *config.init_y
                             : random_strategy(game.domain(Player::kY), cfg_y.parametrization,
                                               config.reset, init_rng);
    b.welfare_x = assign_x[j];
    b.welfare_y = self_play ? assign_y[j] : -1;
    const WelfareFunction& wf_x = functions.at(static_cast<std::size_t>(b.welfare_x));
    const WelfareFunction& wf_y =
        self_play ? functions.at(static_cast<std::size_t>(b.welfare_y)) : greedy;

    Rng rng_x(derive_seed(config.seed, {agent_label(Player::kX), ep, j}));
    Rng rng_y(derive_seed(config.seed, {agent_label(Player::kY), ep, j}));
    Strategy x = b.init_x;
    Strategy y = b.init_y;
    for (int t = 0; t < config.steps; ++t) {
      Strategy nx = welfare_os_step(config.inner, wf_x, game, Player::kX, x, y, rng_x);
      if (opponent.kind != OpponentKind::kFrozen) {
        y = welfare_os_step(cfg_y, wf_y, game, Player::kY, y, x, rng_y);
      }
      x = std::move(nx);
    }
    b.final_x = x;
    b.final_y = y;
    b.reward = game.rewards(x, y);
  });
  return out;
}

std::vector<int> posterior_sampling_update(const std::vector<double>& rewards,
                                           const std::vector<int>& assignments,
                                           int num_functions, Rng& rng) {
  if (rewards.size() != assignments.size()) {
    throw ConfigError("rewards and assignments differ in length");
  }
  std::vector<std::vector<int>> usage(static_cast<std::size_t>(num_functions));
  for (std::size_t m = 0; m < assignments.size(); ++m) {
    const int k = assignments[m];
    if (k < 0 || k >= num_functions) throw ConfigError("assignment out of range");
    usage[static_cast<std::size_t>(k)].push_back(static_cast<int>(m));
  }
  std::vector<int> next(assignments.size());
  for (int& choice : next) {
    int best = -1;
    double best_reward = 0.0;
    for (int k = 0; k < num_functions; ++k) {
      const auto& used = usage[static_cast<std::size_t>(k)];
      if (used.empty()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, used.size() - 1);
      const double r = rewards[static_cast<std::size_t>(used[pick(rng)])];
      if (best < 0 || r > best_reward) {
        best = k;
        best_reward = r;
      }
    }
    choice = best;
  }
  return next;
}

WelfuseHistory welfuse_run(const WelfuseConfig& config, const OpponentSpec& opponent,
                           const Game& game) {
  config.validate();
  if (opponent.kind == OpponentKind::kNaive) opponent.learner.validate();
  const bool self_play = opponent.kind == OpponentKind::kSelfPlay;
  const int nw = static_cast<int>(config.welfare_set.size());
  const std::vector<WelfareFunction> functions = make_welfare_functions(game, config.welfare_set);

  WelfuseHistory h;
  h.game = std::string(game.name());
  h.opponent = opponent.kind;
  h.welfare_set = config.welfare_set;
  h.config = config;

  Rng assign_x_rng(derive_seed(config.seed, {kStreamAssignment, kStreamLearnerX}));
  Rng assign_y_rng(derive_seed(config.seed, {kStreamAssignment, kStreamLearnerY}));
  std::vector<int> ax = uniform_assignments(config.batch, nw, assign_x_rng);
  std::vector<int> ay;
  if (self_play) ay = uniform_assignments(config.batch, nw, assign_y_rng);

  for (int e = 0; e < config.episodes; ++e) {
    h.episodes.push_back(run_episode(config, opponent, game, functions, ax, ay, e));
    if (e + 1 == config.episodes) break;
    const auto& ep = h.episodes.back();
    const auto ue = static_cast<std::uint64_t>(e);
    std::vector<double> rx, ry;
    for (const BatchOutcome& b : ep) {
      rx.push_back(b.reward.x);
      ry.push_back(b.reward.y);
    }
    Rng post_x(derive_seed(config.seed, {kStreamPosterior, kStreamLearnerX, ue}));
    ax = posterior_sampling_update(rx, ax, nw, post_x);
    if (self_play) {
      Rng post_y(derive_seed(config.seed, {kStreamPosterior, kStreamLearnerY, ue}));
      ay = posterior_sampling_update(ry, ay, nw, post_y);
    }
  }
  return h;
}

std::string to_json(const WelfuseHistory& h) {
  using nlohmann::json;
  json doc;
  doc["schema"] = 1;
  doc["kind"] = "welfuse-history";
  doc["game"] = h.game;
  doc["opponent"] = std::string(to_string(h.opponent));
  json tags = json::array();
  for (WelfareTag t : h.welfare_set) tags.push_back(std::string(to_string(t)));
  doc["welfare_set"] = tags;
  const WelfuseConfig& c = h.config;
  doc["config"] = {{"episodes", c.episodes},
                   {"steps", c.steps},
                   {"batch", c.batch},
                   {"seed", c.seed},
                   {"reset", std::string(to_string(c.reset))},
                   {"inner",
                    {{"rule", std::string(to_string(c.inner.rule))},
                     {"eta", c.inner.eta},
                     {"alpha", c.inner.alpha},
                     {"sigma", c.inner.sigma},
                     {"n", c.inner.n_samples},
                     {"m", c.inner.m_samples},
                     {"inner_steps", c.inner.inner_steps},
                     {"unroll", c.inner.unroll_gradient},
                     {"param", std::string(to_string(c.inner.parametrization))}}}};
  const bool self_play = h.opponent == OpponentKind::kSelfPlay;
  json episodes = json::array();
  for (std::size_t e = 0; e < h.episodes.size(); ++e) {
    json ep;
    ep["episode"] = e;
    json batch = json::array();
    for (const BatchOutcome& b : h.episodes[e]) {
      json item;
      item["welfare_x"] = std::string(to_string(h.welfare_set[static_cast<std::size_t>(b.welfare_x)]));
      if (b.welfare_y >= 0) {
        item["welfare_y"] =
            std::string(to_string(h.welfare_set[static_cast<std::size_t>(b.welfare_y)]));
      }
      item["init_x"] = b.init_x;
      item["init_y"] = b.init_y;
      item["x"] = b.final_x;
      item["y"] = b.final_y;
      item["reward_x"] = b.reward.x;
      item["reward_y"] = b.reward.y;
      batch.push_back(std::move(item));
    }
    ep["batch"] = std::move(batch);
    json counts;
    const auto cx = h.counts(static_cast<int>(e), Player::kX);
    for (std::size_t k = 0; k < cx.size(); ++k) {
      counts["x"][std::string(to_string(h.welfare_set[k]))] = cx[k];
    }
    if (self_play) {
      const auto cy = h.counts(static_cast<int>(e), Player::kY);
      for (std::size_t k = 0; k < cy.size(); ++k) {
        counts["y"][std::string(to_string(h.welfare_set[k]))] = cy[k];
      }
    }
    ep["counts"] = std::move(counts);
    ep["mean_reward_x"] = h.mean_reward(static_cast<int>(e), Player::kX);
    ep["mean_reward_y"] = h.mean_reward(static_cast<int>(e), Player::kY);
    episodes.push_back(std::move(ep));
  }
  doc["episodes"] = std::move(episodes);
  return doc.dump(1) + "\n";
}

}  // namespace welfare
