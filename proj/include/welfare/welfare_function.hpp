#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "welfare/dual.hpp"
#include "welfare/games.hpp"

namespace welfare {

enum class WelfareTag {
  kGreedy,
  kEgalitarian,
  kFairness,
  kShiftEgalitarian,
  kAffineEgalitarian,
  kAffineFairness,
};

std::string_view to_string(WelfareTag tag);
/// Throws ConfigError for unknown names.
WelfareTag parse_welfare_tag(std::string_view name);
bool is_normalized(WelfareTag tag);

/// Stackelberg baselines and arrogance penalties for both players.
struct NormalizationConstants {
  RewardPair<double> baseline;
  RewardPair<double> penalty;
};

/// Scalar objective over a joint reward pair. Normalised tags carry the
/// game's Stackelberg baselines and arrogance penalties.
class WelfareFunction {
 public:
  WelfareFunction() = default;

  static WelfareFunction greedy() { return WelfareFunction(WelfareTag::kGreedy); }

  /// Throws ConfigError if a normalised tag is requested without constants,
  /// or an affine tag with a zero arrogance penalty.
  static WelfareFunction make(WelfareTag tag,
                              std::optional<NormalizationConstants> constants = std::nullopt);

  WelfareTag tag() const { return tag_; }
  const std::optional<NormalizationConstants>& constants() const { return constants_; }

  /// Welfare seen by `player` given the pair (rx, ry). Nonsmooth branches tie
  /// toward the x-player's reward.
  template <class T>
  T value(const T& rx, const T& ry, Player player) const {
    switch (tag_) {
      case WelfareTag::kGreedy:
        return player == Player::kX ? rx : ry;
      case WelfareTag::kEgalitarian:
        return min_branch(rx, ry);
      case WelfareTag::kFairness:
        return -abs_branch(T(rx - ry));
      case WelfareTag::kShiftEgalitarian:
        return min_branch(T(rx - constants_->baseline.x), T(ry - constants_->baseline.y));
      case WelfareTag::kAffineEgalitarian:
        return min_branch(affine(rx, Player::kX), affine(ry, Player::kY));
      case WelfareTag::kAffineFairness:
        return -abs_branch(T(affine(rx, Player::kX) - affine(ry, Player::kY)));
    }
    return rx;
  }

  double operator()(double rx, double ry, Player player) const { return value(rx, ry, player); }

 private:
  explicit WelfareFunction(WelfareTag tag) : tag_(tag) {}

  template <class T>
  T affine(const T& r, Player p) const {
    return (r - constants_->baseline.of(p)) / std::abs(constants_->penalty.of(p));
  }

  WelfareTag tag_ = WelfareTag::kGreedy;
  std::optional<NormalizationConstants> constants_;
};

/// Plain-function form: welfare of (rx, ry) as seen by `player`.
double welfare_value(const WelfareFunction& wf, double rx, double ry, Player player);

}  // namespace welfare
