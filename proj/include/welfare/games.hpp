#pragma once

#include <array>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "welfare/dual.hpp"

namespace welfare {

/// A strategy is a point in a box; which box is owned by the game.
using Strategy = std::vector<double>;

enum class Player { kX = 0, kY = 1 };

inline Player other(Player p) { return p == Player::kX ? Player::kY : Player::kX; }
std::string_view to_string(Player p);

template <class T>
struct RewardPair {
  T x{};
  T y{};

  const T& of(Player p) const { return p == Player::kX ? x : y; }
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  bool contains(double v) const { return v >= lo && v <= hi; }
};

/// Per-coordinate bounds for one player's strategy.
struct Domain {
  std::vector<Interval> bounds;

  std::size_t dim() const { return bounds.size(); }
  bool contains(std::span<const double> s) const;
  Strategy project(std::span<const double> s) const;

  static Domain box(std::size_t dim, double lo, double hi);
};

/// Thrown for inputs outside a game's strategy domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown for malformed configuration (unknown names, bad hyperparameters).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// R^x(a, b) = R^y(b, a) (kSymmetric) or R^x(a, b) = -R^y(b, a) (kAntisymmetric).
enum class Symmetry { kNone, kSymmetric, kAntisymmetric };

/// Two-player game with reward pair R^x(x, y), R^y(x, y).
///
/// `rewards` is overloaded on the scalar type so every game can be
/// differentiated by forward-mode AD; it performs no domain checks.
/// `evaluate` is the checked entry point.
class Game {
 public:
  virtual ~Game() = default;

  virtual std::string_view name() const = 0;
  virtual Symmetry symmetry() const { return Symmetry::kNone; }

  virtual RewardPair<double> rewards(std::span<const double> x,
                                     std::span<const double> y) const = 0;
  virtual RewardPair<Dual1> rewards(std::span<const Dual1> x,
                                    std::span<const Dual1> y) const = 0;
  virtual RewardPair<Dual2> rewards(std::span<const Dual2> x,
                                    std::span<const Dual2> y) const = 0;

  const Domain& domain(Player p) const { return p == Player::kX ? domain_x_ : domain_y_; }
  std::size_t dim(Player p) const { return domain(p).dim(); }

  /// Reward pair with domain and dimension validation.
  RewardPair<double> evaluate(std::span<const double> x, std::span<const double> y) const;

  /// Gradient of `player`'s reward with respect to its own strategy (exact, via AD).
  Strategy gradient(Player player, std::span<const double> x, std::span<const double> y) const;

 protected:
  Game(Domain dx, Domain dy) : domain_x_(std::move(dx)), domain_y_(std::move(dy)) {}

 private:
  Domain domain_x_;
  Domain domain_y_;
};

/// Routes the three `rewards` overloads to `Derived::template evaluate<T>`.
template <class Derived>
class GameBase : public Game {
 public:
  RewardPair<double> rewards(std::span<const double> x,
                             std::span<const double> y) const override {
    return self().template evaluate<double>(x, y);
  }
  RewardPair<Dual1> rewards(std::span<const Dual1> x,
                            std::span<const Dual1> y) const override {
    return self().template evaluate<Dual1>(x, y);
  }
  RewardPair<Dual2> rewards(std::span<const Dual2> x,
                            std::span<const Dual2> y) const override {
    return self().template evaluate<Dual2>(x, y);
  }

 protected:
  using Game::Game;

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }
};

// ---------------------------------------------------------------------------
// 2x2 matrix games.

/// cells[row][col] = (row-player reward, column-player reward). Action 0 is
/// the first listed action; a scalar strategy is the probability of action 0.
struct PayoffTable2x2 {
  std::string name;
  std::array<std::string, 2> row_actions;
  std::array<std::string, 2> col_actions;
  std::array<std::array<std::array<double, 2>, 2>, 2> cells{};

  bool operator==(const PayoffTable2x2&) const = default;

  /// Throws ConfigError on non-finite entries.
  void validate() const;
};

/// Expected rewards of the bilinear form [x, 1-x] A [y, 1-y]^T.
RewardPair<double> matrix_game_reward(const PayoffTable2x2& table, double x, double y);

class MatrixGame final : public GameBase<MatrixGame> {
 public:
  explicit MatrixGame(PayoffTable2x2 table, Symmetry symmetry = Symmetry::kNone);

  std::string_view name() const override { return table_.name; }
  Symmetry symmetry() const override { return symmetry_; }
  const PayoffTable2x2& table() const { return table_; }

  template <class T>
  RewardPair<T> evaluate(std::span<const T> xs, std::span<const T> ys) const {
    const T& x = xs[0];
    const T& y = ys[0];
    const T xc = T(1.0) - x;
    const T yc = T(1.0) - y;
    const auto& c = table_.cells;
    const T cc = x * y, cd = x * yc, dc = xc * y, dd = xc * yc;
    return {cc * c[0][0][0] + cd * c[0][1][0] + dc * c[1][0][0] + dd * c[1][1][0],
            cc * c[0][0][1] + cd * c[0][1][1] + dc * c[1][0][1] + dd * c[1][1][1]};
  }

 private:
  PayoffTable2x2 table_;
  Symmetry symmetry_;
};

// ---------------------------------------------------------------------------
// Continuous games.

RewardPair<double> impossible_market_reward(double x, double y);

/// Rational game without pure or mixed Nash equilibria. Analysed on [-2, 2]^2.
class ImpossibleMarket final : public GameBase<ImpossibleMarket> {
 public:
  static constexpr double kBound = 2.0;

  ImpossibleMarket();
  // Not symmetric under swapping players: the bilinear terms have opposite signs.
  std::string_view name() const override { return "ImpossibleMarket"; }

  template <class T>
  RewardPair<T> evaluate(std::span<const T> xs, std::span<const T> ys) const {
    const T& x = xs[0];
    const T& y = ys[0];
    const T x2 = x * x, y2 = y * y;
    const T x4 = x2 * x2, y4 = y2 * y2;
    const T coupling = (y4 / (T(1.0) + x2) - x4 / (T(1.0) + y2)) * 0.25;
    const T rx = -(x4 * x2) / 6.0 + x2 * 0.5 - x * y - coupling;
    const T ry = -(y4 * y2) / 6.0 + y2 * 0.5 + x * y + coupling;
    return {rx, ry};
  }
};

/// R^x = 2x - (x+y)^2, R^y = 2y - (x+y)^2 on [-2, 3]^2. Throws DomainError outside.
RewardPair<double> tandem_reward(double x, double y);

class Tandem final : public GameBase<Tandem> {
 public:
  static constexpr double kLower = -2.0;
  static constexpr double kUpper = 3.0;

  Tandem();
  std::string_view name() const override { return "Tandem"; }
  Symmetry symmetry() const override { return Symmetry::kSymmetric; }

  template <class T>
  RewardPair<T> evaluate(std::span<const T> xs, std::span<const T> ys) const {
    const T s = xs[0] + ys[0];
    const T sq = s * s;
    return {xs[0] * 2.0 - sq, ys[0] * 2.0 - sq};
  }
};

/// Wraps a game with one player's reward replaced by a * R + b (a > 0).
class AffineRewardGame final : public GameBase<AffineRewardGame> {
 public:
  /// Throws ConfigError unless a > 0 and both coefficients are finite.
  AffineRewardGame(std::shared_ptr<const Game> inner, Player player, double a, double b);

  std::string_view name() const override { return inner_->name(); }

  template <class T>
  RewardPair<T> evaluate(std::span<const T> x, std::span<const T> y) const {
    RewardPair<T> r = inner_->rewards(x, y);
    T& v = player_ == Player::kX ? r.x : r.y;
    v = v * a_ + b_;
    return r;
  }

 private:
  std::shared_ptr<const Game> inner_;
  Player player_;
  double a_;
  double b_;
};

// ---------------------------------------------------------------------------
// Catalog.

/// The eight payoff tables of the matrix-game catalog, in catalog order.
const std::vector<PayoffTable2x2>& builtin_payoff_tables();

/// Symmetry class of a catalog matrix game (kNone for unknown names).
Symmetry matrix_game_symmetry(std::string_view name);

/// Parses a JSON document {"schema": 1, "games": [{name, row_actions,
/// col_actions, payoffs: [[[rx, ry], [rx, ry]], [[rx, ry], [rx, ry]]]}]}.
std::vector<PayoffTable2x2> parse_payoff_tables(std::string_view json_text);
std::string serialize_payoff_tables(const std::vector<PayoffTable2x2>& tables);
std::vector<PayoffTable2x2> load_payoff_tables(const std::string& path);

/// All names accepted by make_game, in catalog order.
std::vector<std::string> game_names();

struct GameOptions {
  double ipd_gamma = 0.96;
};

/// Constructs a catalog game by name; throws ConfigError for unknown names.
std::shared_ptr<const Game> make_game(std::string_view name, const GameOptions& options = {});

}  // namespace welfare
