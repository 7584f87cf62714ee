#include "welfare/equilibria.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "welfare/parallel.hpp"

namespace welfare {

StrategyGrid::StrategyGrid(double lo, double hi, int points) : lo_(lo), hi_(hi), points_(points) {
  if (points < 2) throw ConfigError("strategy grid needs at least 2 points");
  if (!(hi > lo)) throw ConfigError("strategy grid needs hi > lo");
}

StrategyGrid StrategyGrid::for_domain(const Game& game, Player player, int points) {
  const Domain& d = game.domain(player);
  if (d.dim() != 1) {
    throw ConfigError(std::string(game.name()) + ": grid search needs 1-D strategies");
  }
  return StrategyGrid(d.bounds[0].lo, d.bounds[0].hi, points);
}

double StrategyGrid::operator[](int i) const {
  if (i == points_ - 1) return hi_;
  return lo_ + (hi_ - lo_) * static_cast<double>(i) / static_cast<double>(points_ - 1);
}

int StrategyGrid::nearest(double v) const {
  const double t = (v - lo_) / (hi_ - lo_) * static_cast<double>(points_ - 1);
  return std::clamp(static_cast<int>(std::lround(t)), 0, points_ - 1);
}

std::vector<double> StrategyGrid::values() const {
  std::vector<double> out(static_cast<std::size_t>(points_));
  for (int i = 0; i < points_; ++i) out[static_cast<std::size_t>(i)] = (*this)[i];
  return out;
}

int argmax_first(const std::vector<double>& values) {
  const double best = *std::max_element(values.begin(), values.end());
  const double tol = kArgmaxTieTolerance * std::max(1.0, std::abs(best));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= best - tol) return static_cast<int>(i);
  }
  return 0;
}

// ---------------------------------------------------------------------------

GameAnalysis::GameAnalysis(std::shared_ptr<const Game> game, int points, int threads)
    : game_(std::move(game)),
      grid_x_(StrategyGrid::for_domain(*game_, Player::kX, points)),
      grid_y_(StrategyGrid::for_domain(*game_, Player::kY, points)) {
  const int nx = grid_x_.size();
  const int ny = grid_y_.size();
  surface_x_.resize(static_cast<std::size_t>(nx) * ny);
  surface_y_.resize(surface_x_.size());
  parallel_for(static_cast<std::size_t>(nx), threads, [&](std::size_t row) {
    const int i = static_cast<int>(row);
    const double x[1] = {grid_x_[i]};
    for (int j = 0; j < ny; ++j) {
      const double y[1] = {grid_y_[j]};
      const RewardPair<double> r = game_->rewards(x, y);
      surface_x_[row * ny + j] = r.x;
      surface_y_[row * ny + j] = r.y;
    }
  });

  br_y_.responder = Player::kY;
  br_x_.responder = Player::kX;
  std::vector<double> column;
  for (int i = 0; i < nx; ++i) {
    column.assign(surface_y_.begin() + static_cast<std::ptrdiff_t>(i) * ny,
                  surface_y_.begin() + static_cast<std::ptrdiff_t>(i + 1) * ny);
    const int j = argmax_first(column);
    br_y_.index.push_back(j);
    br_y_.strategy.push_back(grid_y_[j]);
    br_y_.reward.push_back(column[static_cast<std::size_t>(j)]);
  }
  column.resize(static_cast<std::size_t>(nx));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) column[static_cast<std::size_t>(i)] = reward(Player::kX, i, j);
    const int i = argmax_first(column);
    br_x_.index.push_back(i);
    br_x_.strategy.push_back(grid_x_[i]);
    br_x_.reward.push_back(column[static_cast<std::size_t>(i)]);
  }
}

double GameAnalysis::reward(Player whose, int i, int j) const {
  const std::size_t k = static_cast<std::size_t>(i) * grid_y_.size() + j;
  return whose == Player::kX ? surface_x_[k] : surface_y_[k];
}

RewardPair<double> GameAnalysis::rewards(int i, int j) const {
  return {reward(Player::kX, i, j), reward(Player::kY, i, j)};
}

const BestResponseMap& GameAnalysis::best_response(Player responder) const {
  return responder == Player::kX ? br_x_ : br_y_;
}

GridSolution GameAnalysis::welfare_equilibrium(Player player, const WelfareFunction& wf) const {
  const BestResponseMap& br = best_response(other(player));
  const int n = grid(player).size();
  std::vector<double> objective(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const int resp = br.index[static_cast<std::size_t>(k)];
    const RewardPair<double> r = player == Player::kX ? rewards(k, resp) : rewards(resp, k);
    objective[static_cast<std::size_t>(k)] = wf.value(r.x, r.y, player);
  }
  GridSolution s;
  s.player = player;
  s.index = argmax_first(objective);
  s.strategy = grid(player)[s.index];
  s.response_index = br.index[static_cast<std::size_t>(s.index)];
  s.response = grid(other(player))[s.response_index];
  s.objective = objective[static_cast<std::size_t>(s.index)];
  s.rewards = player == Player::kX ? rewards(s.index, s.response_index)
                                   : rewards(s.response_index, s.index);
  return s;
}

GridSolution GameAnalysis::stackelberg(Player player) const {
  return welfare_equilibrium(player, WelfareFunction::greedy());
}

std::pair<int, int> GameAnalysis::stackelberg_profile() const {
  return {stackelberg(Player::kX).index, stackelberg(Player::kY).index};
}

const NormalizationConstants& GameAnalysis::normalization() const {
  std::call_once(norm_once_, [this] {
    const GridSolution sx = stackelberg(Player::kX);
    const GridSolution sy = stackelberg(Player::kY);
    const RewardPair<double> profile = rewards(sx.index, sy.index);
    norm_.baseline = {sx.rewards.x, sy.rewards.y};
    norm_.penalty = {norm_.baseline.x - profile.x, norm_.baseline.y - profile.y};
  });
  return norm_;
}

double GameAnalysis::arrogance_penalty(Player player) const {
  return normalization().penalty.of(player);
}

WelfareFunction GameAnalysis::welfare(WelfareTag tag) const {
  if (is_normalized(tag)) return WelfareFunction::make(tag, normalization());
  return WelfareFunction::make(tag);
}

RewardPair<double> GameAnalysis::normalized_rewards(double x, double y,
                                                    NormalizationMode mode) const {
  const double xs[1] = {x};
  const double ys[1] = {y};
  const RewardPair<double> r = game_->evaluate(xs, ys);
  const NormalizationConstants& n = normalization();
  RewardPair<double> out{r.x - n.baseline.x, r.y - n.baseline.y};
  if (mode == NormalizationMode::kAffine) {
    if (n.penalty.x == 0.0 || n.penalty.y == 0.0) {
      throw ConfigError(std::string(game_->name()) +
                        ": affine normalisation undefined for zero arrogance penalty");
    }
    out.x /= std::abs(n.penalty.x);
    out.y /= std::abs(n.penalty.y);
  }
  return out;
}

bool GameAnalysis::is_nash(int i, int j, double tol) const {
  return is_nash(i, j, RewardPair<double>{tol, tol});
}

bool GameAnalysis::is_nash(int i, int j, RewardPair<double> tol) const {
  const double rx = reward(Player::kX, i, j);
  const double ry = reward(Player::kY, i, j);
  return br_x_.reward[static_cast<std::size_t>(j)] - rx <= tol.x &&
         br_y_.reward[static_cast<std::size_t>(i)] - ry <= tol.y;
}

double GameAnalysis::resolution_slack(Player whose, int i, int j) const {
  double slack = 0.0;
  if (whose == Player::kX) {
    for (int dj : {-1, 1}) {
      const int jn = j + dj;
      if (jn < 0 || jn >= grid_y_.size()) continue;
      for (int k = 0; k < grid_x_.size(); ++k) {
        slack = std::max(slack, std::abs(reward(whose, k, jn) - reward(whose, k, j)));
      }
    }
  } else {
    for (int di : {-1, 1}) {
      const int in = i + di;
      if (in < 0 || in >= grid_x_.size()) continue;
      for (int k = 0; k < grid_y_.size(); ++k) {
        slack = std::max(slack, std::abs(reward(whose, in, k) - reward(whose, i, k)));
      }
    }
  }
  return 2.0 * slack;
}

bool GameAnalysis::is_coincidental(double tol) const {
  const auto [i, j] = stackelberg_profile();
  return is_nash(i, j,
                 RewardPair<double>{tol + resolution_slack(Player::kX, i, j),
                                    tol + resolution_slack(Player::kY, i, j)});
}

// ---------------------------------------------------------------------------

BestResponseMap best_response_map(const GameAnalysis& analysis, Player responder) {
  return analysis.best_response(responder);
}

GridSolution stackelberg_strategy(const GameAnalysis& analysis, Player player) {
  return analysis.stackelberg(player);
}

GridSolution welfare_equilibrium_strategy(const GameAnalysis& analysis, Player player,
                                          const WelfareFunction& wf) {
  return analysis.welfare_equilibrium(player, wf);
}

double arrogance_penalty(const GameAnalysis& analysis, Player player) {
  return analysis.arrogance_penalty(player);
}

RewardPair<double> normalized_rewards(const GameAnalysis& analysis, double x, double y,
                                      NormalizationMode mode) {
  return analysis.normalized_rewards(x, y, mode);
}

bool is_nash(const GameAnalysis& analysis, double x, double y, double tol) {
  return analysis.is_nash(analysis.grid(Player::kX).nearest(x),
                          analysis.grid(Player::kY).nearest(y), tol);
}

bool is_coincidental(const GameAnalysis& analysis, double tol) {
  return analysis.is_coincidental(tol);
}

// ---------------------------------------------------------------------------

WEProfileReport we_profile_report(const GameAnalysis& analysis, WelfareTag wf_x,
                                  WelfareTag wf_y) {
  WEProfileReport rep;
  rep.game = std::string(analysis.game().name());
  rep.welfare_x = wf_x;
  rep.welfare_y = wf_y;
  const WelfareFunction fx = analysis.welfare(wf_x);
  const WelfareFunction fy = analysis.welfare(wf_y);
  rep.solution_x = analysis.welfare_equilibrium(Player::kX, fx);
  rep.solution_y = analysis.welfare_equilibrium(Player::kY, fy);
  rep.profile_rewards = analysis.rewards(rep.solution_x.index, rep.solution_y.index);

  const StrategyGrid& gx = analysis.grid(Player::kX);
  const StrategyGrid& gy = analysis.grid(Player::kY);
  rep.grid_x = gx.values();
  rep.grid_y = gy.values();
  rep.br_y_of_x = analysis.best_response(Player::kY).strategy;
  rep.br_x_of_y = analysis.best_response(Player::kX).strategy;

  for (int i = 0; i < gx.size(); ++i) {
    const RewardPair<double> r =
        analysis.rewards(i, analysis.best_response(Player::kY).index[static_cast<std::size_t>(i)]);
    rep.curve_x.x.push_back(r.x);
    rep.curve_x.y.push_back(r.y);
    rep.welfare_curve_x.push_back(fx.value(r.x, r.y, Player::kX));
  }
  for (int j = 0; j < gy.size(); ++j) {
    const RewardPair<double> r =
        analysis.rewards(analysis.best_response(Player::kX).index[static_cast<std::size_t>(j)], j);
    rep.curve_y.x.push_back(r.x);
    rep.curve_y.y.push_back(r.y);
    rep.welfare_curve_y.push_back(fy.value(r.x, r.y, Player::kY));
  }

  const int longest = std::max(gx.size(), gy.size());
  rep.surface_stride = (longest - 1 + kMaxSurfacePoints - 2) / (kMaxSurfacePoints - 1);
  rep.surface_stride = std::max(rep.surface_stride, 1);
  for (int i = 0; i < gx.size(); i += rep.surface_stride) {
    std::vector<double> row_x, row_y;
    for (int j = 0; j < gy.size(); j += rep.surface_stride) {
      row_x.push_back(analysis.reward(Player::kX, i, j));
      row_y.push_back(analysis.reward(Player::kY, i, j));
    }
    rep.surface_x.push_back(std::move(row_x));
    rep.surface_y.push_back(std::move(row_y));
  }
  return rep;
}

namespace {

nlohmann::json solution_json(const GridSolution& s) {
  return {{"strategy", s.strategy},     {"index", s.index},
          {"response", s.response},     {"response_index", s.response_index},
          {"objective", s.objective},   {"reward_x", s.rewards.x},
          {"reward_y", s.rewards.y}};
}

std::vector<double> strided(const std::vector<double>& v, int stride) {
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); i += static_cast<std::size_t>(stride)) out.push_back(v[i]);
  return out;
}

}  // namespace

std::string to_json(const WEProfileReport& r) {
  nlohmann::json doc;
  doc["schema"] = 1;
  doc["kind"] = "we-report";
  doc["game"] = r.game;
  doc["welfare"] = {{"x", to_string(r.welfare_x)}, {"y", to_string(r.welfare_y)}};
  doc["grid"] = {{"x", r.grid_x}, {"y", r.grid_y}};
  doc["br_y_of_x"] = r.br_y_of_x;
  doc["br_x_of_y"] = r.br_x_of_y;
  doc["surface_stride"] = r.surface_stride;
  doc["surface_grid"] = {{"x", strided(r.grid_x, r.surface_stride)},
                         {"y", strided(r.grid_y, r.surface_stride)}};
  doc["surface_x"] = r.surface_x;
  doc["surface_y"] = r.surface_y;
  doc["curves"] = {
      {"x", {{"reward_x", r.curve_x.x}, {"reward_y", r.curve_x.y}, {"welfare", r.welfare_curve_x}}},
      {"y", {{"reward_x", r.curve_y.x}, {"reward_y", r.curve_y.y}, {"welfare", r.welfare_curve_y}}}};
  doc["profile"] = {{"x", r.solution_x.strategy},
                    {"y", r.solution_y.strategy},
                    {"reward_x", r.profile_rewards.x},
                    {"reward_y", r.profile_rewards.y},
                    {"solution_x", solution_json(r.solution_x)},
                    {"solution_y", solution_json(r.solution_y)}};
  return doc.dump(1) + "\n";
}

}  // namespace welfare
