#include <gtest/gtest.h>

#include "json.hpp"
#include "welfare/equilibria.hpp"

namespace welfare {
namespace {

std::shared_ptr<GameAnalysis> analyse(const std::string& name, int points = 201) {
  return std::make_shared<GameAnalysis>(make_game(name), points);
}

TEST(ArgmaxFirst, TiesGoToTheFirstIndex) {
  EXPECT_EQ(argmax_first({1.0, 3.0, 3.0, 2.0}), 1);
  EXPECT_EQ(argmax_first({5.0, 5.0 - 1e-14, 4.0}), 0);
  EXPECT_EQ(argmax_first({5.0 - 1e-14, 5.0}), 0);
  EXPECT_EQ(argmax_first({-1.0, -0.5}), 1);
}

TEST(StrategyGrid, EndpointsAreExact) {
  const StrategyGrid g(-2.0, 3.0, 1001);
  EXPECT_EQ(g[0], -2.0);
  EXPECT_EQ(g[1000], 3.0);
  EXPECT_NEAR(g[500], 0.5, 1e-15);
  EXPECT_EQ(g.nearest(0.5012), 500);
  EXPECT_EQ(g.nearest(10.0), 1000);
  EXPECT_THROW(StrategyGrid(0.0, 1.0, 1), ConfigError);
  EXPECT_THROW(StrategyGrid(1.0, 1.0, 5), ConfigError);
}

TEST(GameAnalysis, RejectsMultiDimensionalGames) {
  EXPECT_THROW(GameAnalysis(make_game("IPD"), 11), ConfigError);
}

// Brute force over the game itself, not the cached surfaces.
TEST(GameAnalysis, BestResponsesMatchBruteForce) {
  for (const auto& name : game_names()) {
    if (name == "IPD") continue;
    const auto game = make_game(name);
    const GameAnalysis a(game, 41);
    const auto& gx = a.grid(Player::kX);
    const auto& gy = a.grid(Player::kY);
    for (int i = 0; i < gx.size(); ++i) {
      std::vector<double> v;
      for (int j = 0; j < gy.size(); ++j) {
        v.push_back(game->rewards(Strategy{gx[i]}, Strategy{gy[j]}).y);
      }
      EXPECT_EQ(a.best_response(Player::kY).index[i], argmax_first(v)) << name;
    }
  }
}

TEST(GameAnalysis, StackelbergMatchesBruteForceBilevel) {
  for (const auto& name : {"ChickenGame", "EagleGame", "ImpossibleMarket", "Tandem"}) {
    const auto game = make_game(name);
    const GameAnalysis a(game, 51);
    const auto& gx = a.grid(Player::kX);
    const auto& gy = a.grid(Player::kY);
    std::vector<double> leader;
    for (int i = 0; i < gx.size(); ++i) {
      std::vector<double> resp;
      for (int j = 0; j < gy.size(); ++j) {
        resp.push_back(game->rewards(Strategy{gx[i]}, Strategy{gy[j]}).y);
      }
      const int j = argmax_first(resp);
      leader.push_back(game->rewards(Strategy{gx[i]}, Strategy{gy[j]}).x);
    }
    EXPECT_EQ(a.stackelberg(Player::kX).index, argmax_first(leader)) << name;
  }
}

TEST(GameAnalysis, StackelbergIsGreedyWelfareEquilibrium) {
  for (const auto& name : {"StagHunt", "BachOrStravinsky", "AwkwardGame"}) {
    const auto a = analyse(name);
    for (Player p : {Player::kX, Player::kY}) {
      const auto s = a->stackelberg(p);
      const auto w = a->welfare_equilibrium(p, WelfareFunction::greedy());
      EXPECT_EQ(s.index, w.index);
      EXPECT_EQ(s.objective, w.objective);
    }
  }
}

TEST(GameAnalysis, ChickenPenaltyAndBaseline) {
  const auto a = analyse("ChickenGame");
  EXPECT_EQ(a->normalization().baseline.x, 1.0);
  EXPECT_EQ(a->arrogance_penalty(Player::kX), 101.0);
  EXPECT_EQ(a->arrogance_penalty(Player::kY), 101.0);
}

TEST(GameAnalysis, NormalisedRewardVanishesAtTheBaseline) {
  for (const auto& name : {"ChickenGame", "EagleGame", "BachOrStravinsky"}) {
    const auto a = analyse(name);
    const auto sx = a->stackelberg(Player::kX);
    const auto r = a->normalized_rewards(sx.strategy, sx.response, NormalizationMode::kShift);
    EXPECT_NEAR(r.x, 0.0, 1e-12) << name;
  }
}

TEST(GameAnalysis, AffineNormalisationNeedsNonZeroPenalty) {
  // Prisoners' Dilemma: the Stackelberg profile is the NE, so penalties vanish.
  const auto a = analyse("PrisonersDilemma");
  EXPECT_EQ(a->arrogance_penalty(Player::kX), 0.0);
  EXPECT_THROW(a->normalized_rewards(0.5, 0.5, NormalizationMode::kAffine), ConfigError);
  EXPECT_THROW(a->welfare(WelfareTag::kAffineEgalitarian), ConfigError);
}

TEST(GameAnalysis, NashChecks) {
  const auto pd = analyse("PrisonersDilemma");
  EXPECT_TRUE(is_nash(*pd, 0.0, 0.0));
  EXPECT_FALSE(is_nash(*pd, 1.0, 1.0));
  const auto sh = analyse("StagHunt");
  EXPECT_TRUE(is_nash(*sh, 1.0, 1.0));
  EXPECT_TRUE(is_nash(*sh, 0.0, 0.0));
  EXPECT_FALSE(is_nash(*sh, 1.0, 0.0));
}

TEST(GameAnalysis, SlackIsZeroForConstantOpponentInfluence) {
  // Player x's reward in Tandem changes with y, so the slack is positive;
  // the slack only widens the Nash test.
  const auto a = analyse("Tandem");
  const auto [i, j] = a->stackelberg_profile();
  EXPECT_GT(a->resolution_slack(Player::kX, i, j), 0.0);
  EXPECT_FALSE(a->is_coincidental());
}

// R -> aR + b on one player leaves every argmax of that player unchanged.
TEST(GameAnalysis, BestResponsesInvariantUnderAffineRewards) {
  for (const auto& name : {"ChickenGame", "EagleGame"}) {
    const auto base = make_game(name);
    const GameAnalysis a(base, 201);
    for (Player p : {Player::kX, Player::kY}) {
      const GameAnalysis t(std::make_shared<AffineRewardGame>(base, p, 3.0, -7.0), 201);
      EXPECT_EQ(t.best_response(p).index, a.best_response(p).index);
      EXPECT_EQ(t.stackelberg_profile(), a.stackelberg_profile());
      EXPECT_NEAR(t.arrogance_penalty(p), 3.0 * a.arrogance_penalty(p), 1e-9);
    }
  }
}

TEST(AffineRewardGame, Validation) {
  EXPECT_THROW(AffineRewardGame(make_game("StagHunt"), Player::kX, 0.0, 1.0), ConfigError);
  EXPECT_THROW(AffineRewardGame(make_game("StagHunt"), Player::kX, -1.0, 1.0), ConfigError);
  const AffineRewardGame g(make_game("StagHunt"), Player::kY, 2.0, 1.0);
  const auto r = static_cast<const Game&>(g).evaluate(Strategy{1.0}, Strategy{1.0});
  EXPECT_EQ(r.x, 10.0);
  EXPECT_EQ(r.y, 21.0);
}

TEST(Report, JsonShape) {
  const GameAnalysis a(make_game("ChickenGame"), 1001);
  const auto rep = we_profile_report(a, WelfareTag::kEgalitarian, WelfareTag::kEgalitarian);
  EXPECT_LE(rep.surface_x.size(), static_cast<std::size_t>(kMaxSurfacePoints));
  EXPECT_EQ(rep.surface_x.size(), rep.surface_x.front().size());
  const auto doc = nlohmann::json::parse(to_json(rep));
  EXPECT_EQ(doc["schema"], 1);
  EXPECT_EQ(doc["kind"], "we-report");
  EXPECT_EQ(doc["welfare"]["x"], "egalitarian");
  EXPECT_EQ(doc["grid"]["x"].size(), 1001u);
  EXPECT_EQ(doc["br_y_of_x"].size(), 1001u);
  EXPECT_EQ(doc["curves"]["x"]["welfare"].size(), 1001u);
  EXPECT_EQ(doc["surface_grid"]["x"].size(), doc["surface_x"].size());
  EXPECT_NEAR(doc["profile"]["x"].get<double>(), 0.99, 0.005);
  EXPECT_NEAR(doc["profile"]["reward_x"].get<double>(), -0.011, 0.05);
}

}  // namespace
}  // namespace welfare
