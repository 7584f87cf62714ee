#include "welfare/games.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "welfare/ipd.hpp"

namespace welfare {

std::string_view to_string(Player p) { return p == Player::kX ? "x" : "y"; }

bool Domain::contains(std::span<const double> s) const {
  if (s.size() != bounds.size()) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!bounds[i].contains(s[i])) return false;
  }
  return true;
}

Strategy Domain::project(std::span<const double> s) const {
  Strategy out(s.begin(), s.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::clamp(out[i], bounds[i].lo, bounds[i].hi);
  }
  return out;
}

Domain Domain::box(std::size_t dim, double lo, double hi) {
  return Domain{std::vector<Interval>(dim, Interval{lo, hi})};
}

RewardPair<double> Game::evaluate(std::span<const double> x, std::span<const double> y) const {
  if (!domain_x_.contains(x) || !domain_y_.contains(y)) {
    throw DomainError(std::string(name()) + ": strategy outside the game domain");
  }
  return rewards(x, y);
}

Strategy Game::gradient(Player player, std::span<const double> x,
                        std::span<const double> y) const {
  std::vector<Dual1> xd(x.begin(), x.end());
  std::vector<Dual1> yd(y.begin(), y.end());
  auto& own = player == Player::kX ? xd : yd;
  Strategy g(own.size());
  for (std::size_t i = 0; i < own.size(); ++i) {
    own[i].d = 1.0;
    g[i] = rewards(std::span<const Dual1>(xd), std::span<const Dual1>(yd)).of(player).d;
    own[i].d = 0.0;
  }
  return g;
}

// ---------------------------------------------------------------------------

void PayoffTable2x2::validate() const {
  for (const auto& row : cells) {
    for (const auto& cell : row) {
      for (double v : cell) {
        if (!std::isfinite(v)) throw ConfigError(name + ": non-finite payoff entry");
      }
    }
  }
}

RewardPair<double> matrix_game_reward(const PayoffTable2x2& table, double x, double y) {
  if (!(x >= 0.0 && x <= 1.0) || !(y >= 0.0 && y <= 1.0)) {
    throw DomainError("matrix game probabilities must lie in [0, 1]");
  }
  const double xs[1] = {x};
  const double ys[1] = {y};
  return MatrixGame(table).evaluate<double>(xs, ys);
}

MatrixGame::MatrixGame(PayoffTable2x2 table, Symmetry symmetry)
    : GameBase(Domain::box(1, 0.0, 1.0), Domain::box(1, 0.0, 1.0)),
      table_(std::move(table)),
      symmetry_(symmetry) {
  table_.validate();
}

ImpossibleMarket::ImpossibleMarket()
    : GameBase(Domain::box(1, -kBound, kBound), Domain::box(1, -kBound, kBound)) {}

RewardPair<double> impossible_market_reward(double x, double y) {
  const double xs[1] = {x};
  const double ys[1] = {y};
  return ImpossibleMarket().evaluate<double>(xs, ys);
}

Tandem::Tandem() : GameBase(Domain::box(1, kLower, kUpper), Domain::box(1, kLower, kUpper)) {}

RewardPair<double> tandem_reward(double x, double y) {
  const Interval box{Tandem::kLower, Tandem::kUpper};
  if (!box.contains(x) || !box.contains(y)) {
    throw DomainError("Tandem strategies must lie in [-2, 3]");
  }
  const double xs[1] = {x};
  const double ys[1] = {y};
  return Tandem().evaluate<double>(xs, ys);
}

AffineRewardGame::AffineRewardGame(std::shared_ptr<const Game> inner, Player player, double a,
                                   double b)
    : GameBase(inner->domain(Player::kX), inner->domain(Player::kY)),
      inner_(std::move(inner)),
      player_(player),
      a_(a),
      b_(b) {
  if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ConfigError("affine reward transform needs a finite a > 0 and finite b");
  }
}

// ---------------------------------------------------------------------------

namespace {

PayoffTable2x2 table(std::string name, std::array<std::string, 2> actions,
                     std::array<double, 8> v) {
  PayoffTable2x2 t;
  t.name = std::move(name);
  t.row_actions = actions;
  t.col_actions = actions;
  t.cells = {{{{{v[0], v[1]}, {v[2], v[3]}}}, {{{v[4], v[5]}, {v[6], v[7]}}}}};
  return t;
}

}  // namespace

const std::vector<PayoffTable2x2>& builtin_payoff_tables() {
  static const std::vector<PayoffTable2x2> tables = {
      table("PrisonersDilemma", {"Cooperate", "Defect"},
            {-1.0, -1.0, -3.0, 0.0, 0.0, -3.0, -2.0, -2.0}),
      table("MatchingPennies", {"Heads", "Tails"}, {1.0, -1.0, -1.0, 1.0, -1.0, 1.0, 1.0, -1.0}),
      table("StagHunt", {"Stag", "Hare"}, {10.0, 10.0, 1.0, 8.0, 8.0, 1.0, 5.0, 5.0}),
      table("ChickenGame", {"Chicken out", "Drive straight"},
            {0.0, 0.0, -1.0, 1.0, 1.0, -1.0, -100.0, -100.0}),
      table("BachOrStravinsky", {"Bach", "Stravinsky"}, {2.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 2.0}),
      table("BabyChickenGame", {"Chicken out", "Drive straight"},
            {0.0, 0.0, -1.0, 1.0, 1.0, -1.0, -3.0, -3.0}),
      table("AwkwardGame", {"Cooperate", "Defect"}, {3.0, 1.0, 1.0, 3.0, 2.0, 5.0, 4.0, 2.0}),
      table("EagleGame", {"Cooperate", "Defect"}, {4.0, 1.0, -4.0, -1.0, -2.0, -3.0, 2.0, 3.0}),
  };
  return tables;
}

Symmetry matrix_game_symmetry(std::string_view name) {
  if (name == "PrisonersDilemma" || name == "StagHunt" || name == "ChickenGame" ||
      name == "BabyChickenGame") {
    return Symmetry::kSymmetric;
  }
  if (name == "MatchingPennies") return Symmetry::kAntisymmetric;
  return Symmetry::kNone;
}

std::vector<PayoffTable2x2> parse_payoff_tables(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("payoff tables: ") + e.what());
  }
  if (!doc.is_object() || doc.value("schema", 0) != 1 || !doc.contains("games")) {
    throw ConfigError("payoff tables: expected schema 1 with a 'games' array");
  }
  std::vector<PayoffTable2x2> out;
  try {
    for (const auto& g : doc.at("games")) {
      PayoffTable2x2 t;
      t.name = g.at("name").get<std::string>();
      t.row_actions = g.at("row_actions").get<std::array<std::string, 2>>();
      t.col_actions = g.at("col_actions").get<std::array<std::string, 2>>();
      const auto& p = g.at("payoffs");
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
          t.cells[r][c] = p.at(r).at(c).get<std::array<double, 2>>();
        }
      }
      t.validate();
      out.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("payoff tables: ") + e.what());
  }
  return out;
}

std::string serialize_payoff_tables(const std::vector<PayoffTable2x2>& tables) {
  nlohmann::json games = nlohmann::json::array();
  for (const auto& t : tables) {
    games.push_back({{"name", t.name},
                     {"row_actions", t.row_actions},
                     {"col_actions", t.col_actions},
                     {"payoffs", t.cells}});
  }
  return nlohmann::json{{"schema", 1}, {"games", games}}.dump(2) + "\n";
}

std::vector<PayoffTable2x2> load_payoff_tables(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open payoff table file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_payoff_tables(ss.str());
}

std::vector<std::string> game_names() {
  std::vector<std::string> names;
  for (const auto& t : builtin_payoff_tables()) names.push_back(t.name);
  names.insert(names.end(), {"ImpossibleMarket", "Tandem", "IPD", "IpdTftAlldMix"});
  return names;
}

std::shared_ptr<const Game> make_game(std::string_view name, const GameOptions& options) {
  for (const auto& t : builtin_payoff_tables()) {
    if (t.name == name) return std::make_shared<MatrixGame>(t, matrix_game_symmetry(name));
  }
  if (name == "ImpossibleMarket") return std::make_shared<ImpossibleMarket>();
  if (name == "Tandem") return std::make_shared<Tandem>();
  if (name == "IPD") return ipd_as_game(IpdConfig::standard(options.ipd_gamma));
  if (name == "IpdTftAlldMix") return ipd_mix_as_game(IpdConfig::standard(options.ipd_gamma));
  throw ConfigError("unknown game: " + std::string(name));
}

}  // namespace welfare
