#pragma once

#include <array>
#include <span>

#include "welfare/games.hpp"

namespace welfare {

/// Memory-one IPD strategy: cooperation probabilities for the first move and
/// after each previous joint outcome, listed own move first (CC, CD, DC, DD).
struct IpdStrategy {
  std::array<double, 5> p{};

  static constexpr std::size_t kDim = 5;
  static IpdStrategy tit_for_tat() { return {{1.0, 1.0, 0.0, 1.0, 0.0}}; }
  static IpdStrategy always_defect() { return {{0.0, 0.0, 0.0, 0.0, 0.0}}; }
  static IpdStrategy always_cooperate() { return {{1.0, 1.0, 1.0, 1.0, 1.0}}; }

  bool valid() const;
};

struct IpdConfig {
  PayoffTable2x2 payoffs;  // Prisoners' Dilemma table
  double gamma = 0.96;

  static IpdConfig standard(double gamma = 0.96);
  void validate() const;
};

namespace detail {

/// Solves the 4x4 system A u = b in place by Gaussian elimination with
/// partial pivoting on primal values.
template <class T>
std::array<T, 4> solve4(std::array<std::array<T, 4>, 4> a, std::array<T, 4> b) {
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::abs(primal(a[r][col])) > std::abs(primal(a[pivot][col]))) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (int r = col + 1; r < 4; ++r) {
      const T f = a[r][col] / a[col][col];
      for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::array<T, 4> u{};
  for (int r = 3; r >= 0; --r) {
    T acc = b[r];
    for (int c = r + 1; c < 4; ++c) acc -= a[r][c] * u[c];
    u[r] = acc / a[r][r];
  }
  return u;
}

}  // namespace detail

/// (1 - gamma)-normalised discounted value of memory-one play, for both
/// players. States are ordered (CC, CD, DC, DD) from x's point of view; y's
/// strategy is indexed from its own point of view, so y reads state CD as DC.
template <class T>
RewardPair<T> ipd_value(std::span<const T> p, std::span<const T> q, const IpdConfig& cfg) {
  const auto& c = cfg.payoffs.cells;
  // Row-player outcome (own action, opponent action) -> state index.
  static constexpr int kSwap[4] = {0, 2, 1, 3};
  const T one(1.0);

  std::array<std::array<T, 4>, 4> a{};  // (I - gamma M)^T
  for (int s = 0; s < 4; ++s) {
    const T& px = p[1 + s];
    const T& qy = q[1 + kSwap[s]];
    const std::array<T, 4> row = {px * qy, px * (one - qy), (one - px) * qy,
                                  (one - px) * (one - qy)};
    for (int n = 0; n < 4; ++n) {
      a[n][s] = T(s == n ? 1.0 : 0.0) - row[n] * cfg.gamma;
    }
  }
  const std::array<T, 4> d0 = {p[0] * q[0], p[0] * (one - q[0]), (one - p[0]) * q[0],
                               (one - p[0]) * (one - q[0])};
  const std::array<T, 4> u = detail::solve4(a, d0);

  const double rx[4] = {c[0][0][0], c[0][1][0], c[1][0][0], c[1][1][0]};
  const double ry[4] = {c[0][0][1], c[0][1][1], c[1][0][1], c[1][1][1]};
  T vx(0.0), vy(0.0);
  for (int s = 0; s < 4; ++s) {
    vx += u[s] * rx[s];
    vy += u[s] * ry[s];
  }
  const double scale = 1.0 - cfg.gamma;
  return {vx * scale, vy * scale};
}

RewardPair<double> ipd_value(const IpdStrategy& p, const IpdStrategy& q, const IpdConfig& cfg);

/// t * TFT + (1 - t) * AllD. Throws DomainError for t outside [0, 1].
IpdStrategy ipd_tft_alld_mix(double t);

/// The full memory-one game: 5 cooperation probabilities per player.
class IpdGame final : public GameBase<IpdGame> {
 public:
  explicit IpdGame(IpdConfig cfg);
  std::string_view name() const override { return "IPD"; }
  Symmetry symmetry() const override { return Symmetry::kSymmetric; }
  const IpdConfig& config() const { return cfg_; }

  template <class T>
  RewardPair<T> evaluate(std::span<const T> x, std::span<const T> y) const {
    return ipd_value<T>(x, y, cfg_);
  }

 private:
  IpdConfig cfg_;
};

/// One-dimensional IPD where each player picks the TFT weight t in [0, 1].
class IpdMixGame final : public GameBase<IpdMixGame> {
 public:
  explicit IpdMixGame(IpdConfig cfg);
  std::string_view name() const override { return "IpdTftAlldMix"; }
  Symmetry symmetry() const override { return Symmetry::kSymmetric; }
  const IpdConfig& config() const { return cfg_; }

  template <class T>
  RewardPair<T> evaluate(std::span<const T> x, std::span<const T> y) const {
    const std::array<T, 5> p = mix(x[0]);
    const std::array<T, 5> q = mix(y[0]);
    return ipd_value<T>(std::span<const T>(p), std::span<const T>(q), cfg_);
  }

 private:
  template <class T>
  static std::array<T, 5> mix(const T& t) {
    const T zero(0.0);
    return {t, t, zero, t, zero};
  }

  IpdConfig cfg_;
};

std::shared_ptr<const Game> ipd_as_game(const IpdConfig& cfg);
std::shared_ptr<const Game> ipd_mix_as_game(const IpdConfig& cfg);

}  // namespace welfare
