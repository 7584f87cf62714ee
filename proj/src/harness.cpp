#include "welfare/harness.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "json.hpp"
#include "welfare/parallel.hpp"
#include "welfare/rng.hpp"
#include "welfare/welfuse.hpp"

namespace welfare {

namespace {

using nlohmann::json;

json learner_json(const LearnerConfig& c) {
  return {{"rule", std::string(to_string(c.rule))},
          {"eta", c.eta},
          {"alpha", c.alpha},
          {"sigma", c.sigma},
          {"n", c.n_samples},
          {"m", c.m_samples},
          {"inner_steps", c.inner_steps},
          {"unroll", c.unroll_gradient},
          {"param", std::string(to_string(c.parametrization))}};
}

LearnerConfig learner_from_json(const json& j) {
  LearnerConfig c;
  c.rule = parse_rule(j.at("rule").get<std::string>());
  c.eta = j.at("eta").get<double>();
  c.alpha = j.at("alpha").get<double>();
  c.sigma = j.at("sigma").get<double>();
  c.n_samples = j.at("n").get<int>();
  c.m_samples = j.at("m").get<int>();
  c.inner_steps = j.at("inner_steps").get<int>();
  c.unroll_gradient = j.at("unroll").get<bool>();
  c.parametrization = parse_parametrization(j.at("param").get<std::string>());
  return c;
}

void append_number(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

double parse_number(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("csv: bad number '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string column_name(char who, std::size_t k, std::size_t dim) {
  return dim == 1 ? std::string(1, who) : std::string(1, who) + std::to_string(k);
}

}  // namespace

std::string_view to_string(InitScheme scheme) {
  switch (scheme) {
    case InitScheme::kFixed:
      return "fixed";
    case InitScheme::kUniform:
      return "uniform";
    case InitScheme::kGrid:
      return "grid";
  }
  return "uniform";
}

InitScheme parse_init_scheme(std::string_view name) {
  if (name == "fixed") return InitScheme::kFixed;
  if (name == "uniform") return InitScheme::kUniform;
  if (name == "grid") return InitScheme::kGrid;
  throw ConfigError("unknown init scheme: " + std::string(name));
}

void ExperimentConfig::validate() const {
  const auto g = make_game(game, game_options);
  learner_x.validate();
  learner_y.validate();
  if (steps < 0) throw ConfigError("steps must be non-negative");
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (init == InitScheme::kFixed) {
    if (init_x.size() != g->dim(Player::kX) || init_y.size() != g->dim(Player::kY)) {
      throw ConfigError("fixed init has the wrong dimension");
    }
    if (!g->domain(Player::kX).contains(init_x) || !g->domain(Player::kY).contains(init_y)) {
      throw ConfigError("fixed init lies outside the strategy domain");
    }
  }
  if (init == InitScheme::kGrid) {
    if (init_grid < 1) throw ConfigError("init grid needs at least 1 point per axis");
    if (g->dim(Player::kX) != 1 || g->dim(Player::kY) != 1) {
      throw ConfigError("init grids need 1-D strategies");
    }
  }
}

bool TrajectoryRecord::operator==(const TrajectoryRecord& o) const {
  auto same_learner = [](const LearnerConfig& a, const LearnerConfig& b) {
    return a.rule == b.rule && a.eta == b.eta && a.alpha == b.alpha && a.sigma == b.sigma &&
           a.n_samples == b.n_samples && a.m_samples == b.m_samples &&
           a.inner_steps == b.inner_steps && a.unroll_gradient == b.unroll_gradient &&
           a.parametrization == b.parametrization;
  };
  return game == o.game && same_learner(learner_x, o.learner_x) &&
         same_learner(learner_y, o.learner_y) && seed == o.seed && trial == o.trial &&
         x == o.x && y == o.y && reward_x == o.reward_x && reward_y == o.reward_y;
}

TrialSeeds trial_seeds(std::uint64_t master, int trial) {
  const auto t = static_cast<std::uint64_t>(trial);
  return {derive_seed(master, {t, kStreamInit}), derive_seed(master, {t, kStreamLearnerX}),
          derive_seed(master, {t, kStreamLearnerY})};
}

TrajectoryRecord simulate(const Game& game, const LearnerConfig& lx, const LearnerConfig& ly,
                          const WelfareFunction& wx, const WelfareFunction& wy, Strategy x0,
                          Strategy y0, int steps, std::uint64_t seed_x, std::uint64_t seed_y) {
  const auto start = std::chrono::steady_clock::now();
  TrajectoryRecord r;
  r.game = std::string(game.name());
  r.learner_x = lx;
  r.learner_y = ly;
  LearnerState sx(lx, std::move(x0), seed_x);
  LearnerState sy(ly, std::move(y0), seed_y);
  auto record = [&] {
    const RewardPair<double> rw = game.rewards(sx.strategy(), sy.strategy());
    r.x.push_back(sx.strategy());
    r.y.push_back(sy.strategy());
    r.reward_x.push_back(rw.x);
    r.reward_y.push_back(rw.y);
  };
  r.x.reserve(static_cast<std::size_t>(steps) + 1);
  r.y.reserve(static_cast<std::size_t>(steps) + 1);
  record();
  for (int t = 0; t < steps; ++t) {
    Strategy nx = sx.propose(game, Player::kX, sy.strategy(), wx);
    Strategy ny = sy.propose(game, Player::kY, sx.strategy(), wy);
    sx.set_strategy(std::move(nx));
    sy.set_strategy(std::move(ny));
    record();
  }
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<std::pair<Strategy, Strategy>> init_grid(const Game& game, int points) {
  if (points < 1) throw ConfigError("init grid needs at least 1 point per axis");
  const Interval bx = game.domain(Player::kX).bounds.at(0);
  const Interval by = game.domain(Player::kY).bounds.at(0);
  std::vector<std::pair<Strategy, Strategy>> out;
  for (int i = 0; i < points; ++i) {
    const double x = bx.lo + (bx.hi - bx.lo) * (i + 0.5) / points;
    for (int j = 0; j < points; ++j) {
      const double y = by.lo + (by.hi - by.lo) * (j + 0.5) / points;
      out.push_back({{x}, {y}});
    }
  }
  return out;
}

std::pair<Strategy, Strategy> initial_profile(const ExperimentConfig& cfg, const Game& game,
                                              int trial) {
  switch (cfg.init) {
    case InitScheme::kFixed:
      return {cfg.init_x, cfg.init_y};
    case InitScheme::kGrid:
      return init_grid(game, cfg.init_grid).at(static_cast<std::size_t>(trial));
    case InitScheme::kUniform:
      break;
  }
  Rng rng(trial_seeds(cfg.seed, trial).init);
  Strategy x = random_strategy(game.domain(Player::kX), cfg.learner_x.parametrization,
                               cfg.distribution, rng);
  Strategy y = random_strategy(game.domain(Player::kY), cfg.learner_y.parametrization,
                               cfg.distribution, rng);
  return {std::move(x), std::move(y)};
}

std::vector<TrajectoryRecord> run_trials(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto game = make_game(cfg.game, cfg.game_options);
  const auto wfs = make_welfare_functions(*game, {cfg.welfare_x, cfg.welfare_y});
  std::vector<TrajectoryRecord> out(static_cast<std::size_t>(cfg.trials));
  parallel_for(out.size(), cfg.threads, [&](std::size_t t) {
    const int trial = static_cast<int>(t);
    auto [x0, y0] = initial_profile(cfg, *game, trial);
    const TrialSeeds s = trial_seeds(cfg.seed, trial);
    out[t] = simulate(*game, cfg.learner_x, cfg.learner_y, wfs[0], wfs[1], std::move(x0),
                      std::move(y0), cfg.steps, s.x, s.y);
    out[t].seed = cfg.seed;
    out[t].trial = trial;
  });
  return out;
}

TrajectoryRecord run_match(const ExperimentConfig& cfg) {
  ExperimentConfig one = cfg;
  one.trials = 1;
  return run_trials(one).front();
}

std::vector<TrajectoryRecord> phase_portrait(const ExperimentConfig& cfg) {
  ExperimentConfig grid = cfg;
  grid.init = InitScheme::kGrid;
  grid.trials = cfg.init_grid * cfg.init_grid;
  return run_trials(grid);
}

std::string trajectories_to_json(const std::vector<TrajectoryRecord>& records,
                                 bool include_wall_clock) {
  json doc;
  doc["schema"] = 1;
  doc["kind"] = "trajectories";
  json arr = json::array();
  for (const TrajectoryRecord& r : records) {
    json t;
    t["game"] = r.game;
    t["seed"] = r.seed;
    t["trial"] = r.trial;
    t["learner_x"] = learner_json(r.learner_x);
    t["learner_y"] = learner_json(r.learner_y);
    t["x"] = r.x;
    t["y"] = r.y;
    t["reward_x"] = r.reward_x;
    t["reward_y"] = r.reward_y;
    if (include_wall_clock) t["wall_seconds"] = r.wall_seconds;
    arr.push_back(std::move(t));
  }
  doc["trajectories"] = std::move(arr);
  return doc.dump() + "\n";
}

std::vector<TrajectoryRecord> trajectories_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("trajectory json: ") + e.what());
  }
  if (!doc.is_object() || doc.value("schema", 0) != 1 || doc.value("kind", "") != "trajectories") {
    throw ConfigError("trajectory json: expected schema 1, kind trajectories");
  }
  std::vector<TrajectoryRecord> out;
  try {
    for (const json& t : doc.at("trajectories")) {
      TrajectoryRecord r;
      r.game = t.at("game").get<std::string>();
      r.seed = t.at("seed").get<std::uint64_t>();
      r.trial = t.at("trial").get<int>();
      r.learner_x = learner_from_json(t.at("learner_x"));
      r.learner_y = learner_from_json(t.at("learner_y"));
      r.x = t.at("x").get<std::vector<Strategy>>();
      r.y = t.at("y").get<std::vector<Strategy>>();
      r.reward_x = t.at("reward_x").get<std::vector<double>>();
      r.reward_y = t.at("reward_y").get<std::vector<double>>();
      r.wall_seconds = t.value("wall_seconds", 0.0);
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("trajectory json: ") + e.what());
  }
  return out;
}

std::string trajectories_to_csv(const std::vector<TrajectoryRecord>& records) {
  std::string out;
  if (records.empty()) return out;
  const bool with_trial = records.size() > 1;
  const std::size_t dx = records.front().x.empty() ? 1 : records.front().x.front().size();
  const std::size_t dy = records.front().y.empty() ? 1 : records.front().y.front().size();
  if (with_trial) out += "trial,";
  out += "step";
  for (std::size_t k = 0; k < dx; ++k) out += "," + column_name('x', k, dx);
  for (std::size_t k = 0; k < dy; ++k) out += "," + column_name('y', k, dy);
  out += ",r_x,r_y\n";
  for (const TrajectoryRecord& r : records) {
    for (std::size_t s = 0; s < r.size(); ++s) {
      if (with_trial) out += std::to_string(r.trial) + ",";
      out += std::to_string(s);
      for (double v : r.x[s]) {
        out += ',';
        append_number(out, v);
      }
      for (double v : r.y[s]) {
        out += ',';
        append_number(out, v);
      }
      out += ',';
      append_number(out, r.reward_x[s]);
      out += ',';
      append_number(out, r.reward_y[s]);
      out += '\n';
    }
  }
  return out;
}

std::vector<TrajectoryRecord> trajectories_from_csv(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) return {};
  const auto header = split(lines[0], ',');
  const bool with_trial = !header.empty() && header[0] == "trial";
  const std::size_t first = with_trial ? 2 : 1;
  std::size_t dx = 0, dy = 0;
  for (std::size_t c = first; c < header.size(); ++c) {
    if (header[c].starts_with('x')) ++dx;
    if (header[c].starts_with('y')) ++dy;
  }
  if (header.size() != first + dx + dy + 2 || dx == 0 || dy == 0) {
    throw ConfigError("csv: unexpected header");
  }
  std::vector<TrajectoryRecord> out;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto cells = split(lines[l], ',');
    if (cells.size() != header.size()) throw ConfigError("csv: ragged row");
    const int trial = with_trial ? static_cast<int>(parse_number(cells[0])) : 0;
    const int step = static_cast<int>(parse_number(cells[first - 1]));
    if (out.empty() || out.back().trial != trial) {
      out.emplace_back();
      out.back().trial = trial;
    }
    TrajectoryRecord& r = out.back();
    if (step != static_cast<int>(r.size())) throw ConfigError("csv: steps out of order");
    Strategy x, y;
    for (std::size_t k = 0; k < dx; ++k) x.push_back(parse_number(cells[first + k]));
    for (std::size_t k = 0; k < dy; ++k) y.push_back(parse_number(cells[first + dx + k]));
    r.x.push_back(std::move(x));
    r.y.push_back(std::move(y));
    r.reward_x.push_back(parse_number(cells[first + dx + dy]));
    r.reward_y.push_back(parse_number(cells[first + dx + dy + 1]));
  }
  return out;
}

}  // namespace welfare
