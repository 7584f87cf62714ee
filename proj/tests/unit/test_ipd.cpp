#include <gtest/gtest.h>

#include <random>

#include "welfare/ipd.hpp"

namespace welfare {
namespace {

// Truncated sum of the discounted outcome distribution, stepping the Markov
// chain forward instead of solving the linear system.
RewardPair<double> series_value(const IpdStrategy& p, const IpdStrategy& q, const IpdConfig& cfg) {
  const int swap[4] = {0, 2, 1, 3};
  std::array<double, 4> d = {p.p[0] * q.p[0], p.p[0] * (1 - q.p[0]), (1 - p.p[0]) * q.p[0],
                             (1 - p.p[0]) * (1 - q.p[0])};
  const auto& c = cfg.payoffs.cells;
  const double rx[4] = {c[0][0][0], c[0][1][0], c[1][0][0], c[1][1][0]};
  const double ry[4] = {c[0][0][1], c[0][1][1], c[1][0][1], c[1][1][1]};
  double vx = 0, vy = 0, disc = 1;
  for (int t = 0; t < 4000; ++t) {
    for (int s = 0; s < 4; ++s) {
      vx += disc * d[s] * rx[s];
      vy += disc * d[s] * ry[s];
    }
    std::array<double, 4> nd{};
    for (int s = 0; s < 4; ++s) {
      const double a = p.p[1 + s], b = q.p[1 + swap[s]];
      nd[0] += d[s] * a * b;
      nd[1] += d[s] * a * (1 - b);
      nd[2] += d[s] * (1 - a) * b;
      nd[3] += d[s] * (1 - a) * (1 - b);
    }
    d = nd;
    disc *= cfg.gamma;
  }
  return {vx * (1 - cfg.gamma), vy * (1 - cfg.gamma)};
}

TEST(Ipd, ClassicPairings) {
  const IpdConfig cfg = IpdConfig::standard(0.96);
  const auto tft = IpdStrategy::tit_for_tat();
  const auto alld = IpdStrategy::always_defect();
  EXPECT_NEAR(ipd_value(tft, tft, cfg).x, -1.0, 1e-12);
  EXPECT_NEAR(ipd_value(alld, alld, cfg).y, -2.0, 1e-12);
  const auto r = ipd_value(tft, alld, cfg);
  EXPECT_NEAR(r.x, 0.04 * -3.0 + 0.96 * -2.0, 1e-12);
  EXPECT_NEAR(r.y, 0.96 * -2.0, 1e-12);
}

TEST(Ipd, MatchesTruncatedSeries) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double gamma : {0.5, 0.9, 0.96}) {
    const IpdConfig cfg = IpdConfig::standard(gamma);
    for (int i = 0; i < 50; ++i) {
      IpdStrategy p, q;
      for (double& v : p.p) v = u(rng);
      for (double& v : q.p) v = u(rng);
      const auto a = ipd_value(p, q, cfg);
      const auto b = series_value(p, q, cfg);
      EXPECT_NEAR(a.x, b.x, 1e-9);
      EXPECT_NEAR(a.y, b.y, 1e-9);
    }
  }
}

TEST(Ipd, ConfigValidation) {
  EXPECT_THROW(IpdConfig::standard(1.0).validate(), ConfigError);
  EXPECT_THROW(IpdConfig::standard(-0.1).validate(), ConfigError);
  EXPECT_NO_THROW(IpdConfig::standard(0.0).validate());
}

TEST(IpdMix, EndpointsAndDomain) {
  const IpdConfig cfg = IpdConfig::standard();
  const auto tft = ipd_tft_alld_mix(1.0);
  EXPECT_EQ(tft.p, IpdStrategy::tit_for_tat().p);
  EXPECT_EQ(ipd_tft_alld_mix(0.0).p, IpdStrategy::always_defect().p);
  EXPECT_THROW(ipd_tft_alld_mix(1.01), DomainError);
  const auto g = make_game("IpdTftAlldMix");
  const Strategy one{1.0};
  EXPECT_NEAR(g->evaluate(one, one).x, -1.0, 1e-12);
  const Strategy half{0.5};
  const auto mix = ipd_value(ipd_tft_alld_mix(0.5), ipd_tft_alld_mix(0.5), cfg);
  EXPECT_NEAR(g->evaluate(half, half).y, mix.y, 1e-12);
}

TEST(IpdGame, GammaOptionIsHonoured) {
  const auto g = make_game("IPD", GameOptions{.ipd_gamma = 0.5});
  const auto t = IpdStrategy::tit_for_tat();
  const Strategy tft(t.p.begin(), t.p.end());
  const Strategy alld(5, 0.0);
  EXPECT_NEAR(g->evaluate(tft, alld).x, 0.5 * -3.0 + 0.5 * -2.0, 1e-12);
}

}  // namespace
}  // namespace welfare
