#include "welfare/ipd.hpp"

#include <cmath>

namespace welfare {

bool IpdStrategy::valid() const {
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) return false;
  }
  return true;
}

IpdConfig IpdConfig::standard(double gamma) {
  IpdConfig cfg;
  cfg.payoffs = builtin_payoff_tables().front();
  cfg.gamma = gamma;
  cfg.validate();
  return cfg;
}

void IpdConfig::validate() const {
  payoffs.validate();
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("IPD discount must lie in [0, 1)");
}

RewardPair<double> ipd_value(const IpdStrategy& p, const IpdStrategy& q, const IpdConfig& cfg) {
  if (!p.valid() || !q.valid()) throw DomainError("IPD probabilities must lie in [0, 1]");
  return ipd_value<double>(std::span<const double>(p.p), std::span<const double>(q.p), cfg);
}

IpdStrategy ipd_tft_alld_mix(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("TFT/AllD mixture weight must lie in [0, 1]");
  return {{t, t, 0.0, t, 0.0}};
}

IpdGame::IpdGame(IpdConfig cfg)
    : GameBase(Domain::box(IpdStrategy::kDim, 0.0, 1.0), Domain::box(IpdStrategy::kDim, 0.0, 1.0)),
      cfg_(std::move(cfg)) {
  cfg_.validate();
}

IpdMixGame::IpdMixGame(IpdConfig cfg)
    : GameBase(Domain::box(1, 0.0, 1.0), Domain::box(1, 0.0, 1.0)), cfg_(std::move(cfg)) {
  cfg_.validate();
}

std::shared_ptr<const Game> ipd_as_game(const IpdConfig& cfg) {
  return std::make_shared<IpdGame>(cfg);
}

std::shared_ptr<const Game> ipd_mix_as_game(const IpdConfig& cfg) {
  return std::make_shared<IpdMixGame>(cfg);
}

}  // namespace welfare
