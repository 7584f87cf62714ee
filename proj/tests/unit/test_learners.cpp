#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"
#include "welfare/learners.hpp"

namespace welfare {
namespace {

using testing::central_difference;
using testing::fd_error;
using testing::interior_point;

const std::vector<Parametrization> kParams = {Parametrization::kClip, Parametrization::kLogit};

LearnerConfig config(Rule rule, double eta, double alpha, Parametrization p) {
  LearnerConfig c;
  c.rule = rule;
  c.eta = eta;
  c.alpha = alpha;
  c.parametrization = p;
  return c;
}

struct Point {
  Strategy x, y;
};

std::vector<Point> interior_points(const Game& g, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  for (int i = 0; i < n; ++i) {
    Strategy x = interior_point(g.domain(Player::kX), rng);
    Strategy y = interior_point(g.domain(Player::kY), rng);
    out.push_back({std::move(x), std::move(y)});
  }
  return out;
}

TEST(Project, ClampsAndIsIdempotent) {
  const Domain d = Domain::box(1, 0.0, 1.0);
  EXPECT_EQ(project(Strategy{1.3}, d), Strategy{1.0});
  EXPECT_EQ(project(Strategy{-0.2}, d), Strategy{0.0});
  EXPECT_EQ(project(Strategy{0.37}, d), Strategy{0.37});
  EXPECT_EQ(project(project(Strategy{7.0}, d), d), Strategy{1.0});
  EXPECT_THROW(project(Strategy{0.1, 0.2}, d), ConfigError);
}

TEST(LearnerConfig, Validation) {
  LearnerConfig c;
  EXPECT_NO_THROW(c.validate());
  c.eta = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.alpha = -1.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.sigma = -0.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.n_samples = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.inner_steps = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  for (const auto& n : rule_names()) EXPECT_EQ(to_string(parse_rule(n)), n);
  EXPECT_THROW(parse_rule("sos"), ConfigError);
  EXPECT_THROW(parse_parametrization("tanh"), ConfigError);
}

TEST(Chart, AutoPicksLogitOnProbabilityDomains) {
  EXPECT_TRUE(uses_logit(Parametrization::kAuto, make_game("StagHunt")->domain(Player::kX)));
  EXPECT_TRUE(uses_logit(Parametrization::kAuto, make_game("IPD")->domain(Player::kY)));
  EXPECT_FALSE(uses_logit(Parametrization::kAuto, make_game("Tandem")->domain(Player::kX)));
  EXPECT_FALSE(uses_logit(Parametrization::kAuto, make_game("ImpossibleMarket")->domain(Player::kX)));
}

TEST(Chart, RoundTripAndBounds) {
  const Domain d = Domain::box(3, 0.0, 1.0);
  const Strategy s{0.2, 0.5, 0.93};
  const Strategy back = from_latent(to_latent(s, d, Parametrization::kLogit), d,
                                    Parametrization::kLogit);
  for (std::size_t k = 0; k < s.size(); ++k) EXPECT_NEAR(back[k], s[k], 1e-14);
  const Strategy far = from_latent(Strategy{-1e6, 1e6, 0.0}, d, Parametrization::kLogit);
  EXPECT_TRUE(d.contains(far));
  EXPECT_EQ(from_latent(Strategy{1.5, -3.0, 0.5}, d, Parametrization::kClip),
            (Strategy{1.0, 0.0, 0.5}));
}

// Strategy-space examples under clipping.
TEST(NaiveLearner, PrisonersDilemmaStep) {
  const auto g = make_game("PrisonersDilemma");
  const auto greedy = WelfareFunction::greedy();
  const Strategy x{0.5}, y{0.5};
  const UpdateContext ctx{*g, Player::kX, x, y, greedy};
  const Strategy next = nl_update(config(Rule::kNL, 0.1, 0.0, Parametrization::kClip), ctx);
  EXPECT_NEAR(next[0], 0.4, 1e-15);
  // In logit coordinates the step still moves toward defection.
  EXPECT_LT(nl_update(config(Rule::kNL, 0.1, 0.0, Parametrization::kLogit), ctx)[0], 0.5);
}

TEST(NaiveLearner, StagHuntMovesTowardStag) {
  const auto g = make_game("StagHunt");
  const auto greedy = WelfareFunction::greedy();
  const Strategy x{0.9}, y{0.9};
  for (Parametrization p : kParams) {
    const UpdateContext ctx{*g, Player::kX, x, y, greedy};
    EXPECT_GT(nl_update(config(Rule::kNL, 0.1, 0.0, p), ctx)[0], 0.9);
  }
}

TEST(NaiveLearner, CriticalPointIsFixed) {
  // Matching Pennies: x's reward is flat in x when y = 0.5.
  const auto g = make_game("MatchingPennies");
  const auto greedy = WelfareFunction::greedy();
  const Strategy x{0.3}, y{0.5};
  for (Parametrization p : kParams) {
    const UpdateContext ctx{*g, Player::kX, x, y, greedy};
    EXPECT_EQ(nl_update(config(Rule::kNL, 0.1, 0.0, p), ctx), x);
  }
}

TEST(Rules, AlphaZeroCollapsesToNaive) {
  const auto greedy = WelfareFunction::greedy();
  for (const auto& name : game_names()) {
    const auto g = make_game(name);
    for (Parametrization p : kParams) {
      for (const Point& pt : interior_points(*g, 10, 1)) {
        for (Player self : {Player::kX, Player::kY}) {
          const Strategy& own = self == Player::kX ? pt.x : pt.y;
          const Strategy& opp = self == Player::kX ? pt.y : pt.x;
          const UpdateContext ctx{*g, self, own, opp, greedy};
          const Strategy nl = nl_update(config(Rule::kNL, 0.1, 0.0, p), ctx);
          EXPECT_EQ(lookahead_update(config(Rule::kLookAhead, 0.1, 0.0, p), ctx), nl) << name;
          EXPECT_EQ(elola_update(config(Rule::kELOLA, 0.1, 0.0, p), ctx), nl) << name;
          EXPECT_EQ(lola_update(config(Rule::kLOLA, 0.1, 0.0, p), ctx), nl) << name;
          LearnerConfig sh = config(Rule::kShepherd, 0.1, 0.0, p);
          sh.inner_steps = 4;
          EXPECT_EQ(shepherd_update(sh, ctx), nl) << name;
          sh.unroll_gradient = false;
          EXPECT_EQ(shepherd_update(sh, ctx), nl) << name;
        }
      }
    }
  }
}

TEST(Rules, LolaMatchesElolaOnMatrixGames) {
  const auto greedy = WelfareFunction::greedy();
  for (const auto& t : builtin_payoff_tables()) {
    const auto g = make_game(t.name);
    for (Parametrization p : kParams) {
      for (const Point& pt : interior_points(*g, 25, 2)) {
        const UpdateContext ctx{*g, Player::kX, pt.x, pt.y, greedy};
        const Strategy a = lola_update(config(Rule::kLOLA, 0.1, 3.0, p), ctx);
        const Strategy b = elola_update(config(Rule::kELOLA, 0.1, 3.0, p), ctx);
        EXPECT_NEAR(a[0], b[0], 1e-12) << t.name;
      }
    }
  }
}

TEST(Rules, LolaDiffersFromElolaOffMatrixGames) {
  // Tandem is quadratic in y, so the Taylor surrogate is not exact.
  const auto g = make_game("Tandem");
  const auto greedy = WelfareFunction::greedy();
  const Strategy x{0.2}, y{-0.4};
  const UpdateContext ctx{*g, Player::kX, x, y, greedy};
  const Strategy a = lola_update(config(Rule::kLOLA, 0.1, 0.3, Parametrization::kClip), ctx);
  const Strategy b = elola_update(config(Rule::kELOLA, 0.1, 0.3, Parametrization::kClip), ctx);
  EXPECT_GT(std::abs(a[0] - b[0]), 1e-6);
}

TEST(Rules, ShepherdOneStepEquivalences) {
  const auto greedy = WelfareFunction::greedy();
  for (const auto& name : game_names()) {
    const auto g = make_game(name);
    for (Parametrization p : kParams) {
      for (const Point& pt : interior_points(*g, 10, 3)) {
        const UpdateContext ctx{*g, Player::kX, pt.x, pt.y, greedy};
        LearnerConfig sh = config(Rule::kShepherd, 0.1, 0.7, p);
        EXPECT_EQ(shepherd_update(sh, ctx), elola_update(config(Rule::kELOLA, 0.1, 0.7, p), ctx))
            << name;
        sh.unroll_gradient = false;
        EXPECT_EQ(shepherd_update(sh, ctx),
                  lookahead_update(config(Rule::kLookAhead, 0.1, 0.7, p), ctx))
            << name;
      }
    }
  }
}

TEST(Rules, ShepherdUnrollReachesDefectionInPrisonersDilemma) {
  const auto g = make_game("PrisonersDilemma");
  const auto greedy = WelfareFunction::greedy();
  LearnerConfig sh = config(Rule::kShepherd, 0.1, 0.1, Parametrization::kClip);
  sh.inner_steps = 50;
  for (double y0 : {0.1, 0.6, 1.0}) {
    const Strategy x{0.4}, y{y0};
    const UpdateContext ctx{*g, Player::kX, x, y, greedy};
    const Strategy at = to_latent(x, g->domain(Player::kX), Parametrization::kClip);
    EXPECT_DOUBLE_EQ(objective_value(sh, ctx, at), g->rewards(x, Strategy{0.0}).x);
  }
}

// Independent construction of the lookahead opponent under clipping.
TEST(Rules, LookaheadUsesTheShiftedOpponent) {
  const auto g = make_game("PrisonersDilemma");
  const auto greedy = WelfareFunction::greedy();
  const LearnerConfig la = config(Rule::kLookAhead, 0.1, 0.2, Parametrization::kClip);
  for (const Point& pt : interior_points(*g, 20, 4)) {
    const UpdateContext ctx{*g, Player::kX, pt.x, pt.y, greedy};
    const Strategy yhat = project(Strategy{pt.y[0] + 0.2 * g->gradient(Player::kY, pt.x, pt.y)[0]},
                                  g->domain(Player::kY));
    EXPECT_EQ(opponent_lookahead(la, *g, Player::kX, pt.x, pt.y), yhat);
    const UpdateContext shifted{*g, Player::kX, pt.x, yhat, greedy};
    EXPECT_EQ(lookahead_update(la, ctx), nl_update(la, shifted));
  }
}

TEST(Rules, ElolaObjectiveIsTheComposedReward) {
  const auto g = make_game("ChickenGame");
  const auto greedy = WelfareFunction::greedy();
  const LearnerConfig el = config(Rule::kELOLA, 0.1, 0.01, Parametrization::kClip);
  for (const Point& pt : interior_points(*g, 20, 5)) {
    const UpdateContext ctx{*g, Player::kX, pt.x, pt.y, greedy};
    auto composed = [&](double xv) {
      const Strategy x{xv};
      const Strategy yhat = project(
          Strategy{pt.y[0] + 0.01 * g->gradient(Player::kY, x, pt.y)[0]}, g->domain(Player::kY));
      return g->rewards(x, yhat).x;
    };
    EXPECT_NEAR(objective_value(el, ctx, pt.x), composed(pt.x[0]), 1e-12);
    const double fd = central_difference(composed, pt.x[0]);
    EXPECT_LT(fd_error(objective_gradient(el, ctx, pt.x)[0], fd), 1e-5);
  }
}

// Every gradient rule against central differences of its own objective, in
// learner coordinates.
TEST(Rules, ObjectiveGradientsMatchFiniteDifferences) {
  const std::vector<Rule> rules = {Rule::kNL, Rule::kLookAhead, Rule::kELOLA, Rule::kLOLA,
                                   Rule::kShepherd, Rule::kSaGa};
  const auto egal = WelfareFunction::make(WelfareTag::kFairness);
  const auto greedy = WelfareFunction::greedy();
  for (const auto& name : game_names()) {
    const auto g = make_game(name);
    for (Parametrization p : kParams) {
      for (Rule rule : rules) {
        LearnerConfig c = config(rule, 0.1, 0.5, p);
        c.inner_steps = 3;
        int k = 0;
        for (const Point& pt : interior_points(*g, 12, 6)) {
          const WelfareFunction& wf = (k++ % 3 == 0) ? egal : greedy;
          const UpdateContext ctx{*g, Player::kX, pt.x, pt.y, wf};
          const Strategy at = to_latent(pt.x, g->domain(Player::kX), p);
          std::span<const double> sampled;
          if (rule == Rule::kSaGa) sampled = pt.y;
          const Strategy grad = objective_gradient(c, ctx, at, sampled);
          for (std::size_t i = 0; i < at.size(); ++i) {
            const double fd = central_difference(
                [&](double v) {
                  Strategy a = at;
                  a[i] = v;
                  return objective_value(c, ctx, a, sampled);
                },
                at[i]);
            EXPECT_LT(fd_error(grad[i], fd), 1e-5) << name << " " << to_string(rule) << " "
                                                   << to_string(p) << " coord " << i;
          }
        }
      }
    }
  }
}

TEST(SaGa, ZeroNoiseIsNaive) {
  const auto greedy = WelfareFunction::greedy();
  for (const auto& name : game_names()) {
    const auto g = make_game(name);
    for (Parametrization p : kParams) {
      LearnerConfig c = config(Rule::kSaGa, 0.1, 0.0, p);
      c.sigma = 0.0;
      c.n_samples = 5;
      Rng rng(7);
      for (const Point& pt : interior_points(*g, 5, 8)) {
        const UpdateContext ctx{*g, Player::kX, pt.x, pt.y, greedy};
        EXPECT_EQ(saga_update(c, ctx, rng), nl_update(c, ctx)) << name;
      }
    }
  }
}

TEST(SaGa, SelectedResponseIsTheBruteForceArgmax) {
  const auto g = make_game("ImpossibleMarket");
  LearnerConfig c = config(Rule::kSaGa, 0.01, 0.0, Parametrization::kAuto);
  c.n_samples = 200;
  Rng rng(9);
  const Strategy x{0.7}, y{-1.2};
  const SampledResponse s = sample_response(c, *g, Player::kX, x, y, rng);
  ASSERT_EQ(s.candidates.size(), 200u);
  int best = 0;
  double best_value = -1e300;
  for (std::size_t n = 0; n < s.candidates.size(); ++n) {
    EXPECT_TRUE(g->domain(Player::kY).contains(s.candidates[n]));
    const double v = g->rewards(x, s.candidates[n]).y;
    EXPECT_EQ(v, s.values[n]);
    if (v > best_value) {
      best_value = v;
      best = static_cast<int>(n);
    }
  }
  EXPECT_EQ(s.best, best);
}

TEST(SaSa, ZeroNoiseLeavesStrategyUnchanged) {
  const auto greedy = WelfareFunction::greedy();
  for (const auto& name : game_names()) {
    const auto g = make_game(name);
    for (Parametrization p : kParams) {
      LearnerConfig c = config(Rule::kSaSa, 0.1, 0.0, p);
      c.sigma = 0.0;
      c.m_samples = 3;
      c.n_samples = 3;
      Rng rng(10);
      for (const Point& pt : interior_points(*g, 5, 11)) {
        const UpdateContext ctx{*g, Player::kY, pt.y, pt.x, greedy};
        EXPECT_EQ(sasa_update(c, ctx, rng), pt.y) << name;
      }
    }
  }
}

TEST(SaSa, SelectionIsTheBruteForceBestOverTheTable) {
  const auto g = make_game("StagHunt");
  const auto greedy = WelfareFunction::greedy();
  LearnerConfig c = config(Rule::kSaSa, 0.1, 0.0, Parametrization::kAuto);
  c.m_samples = 50;
  c.n_samples = 50;
  c.sigma = 5.0;
  const Strategy x{0.3}, y{0.6};
  const UpdateContext ctx{*g, Player::kX, x, y, greedy};
  Rng rng(12);
  const SasaSelection sel = sasa_select(c, ctx, rng);
  ASSERT_EQ(sel.own_candidates.size(), 50u);
  int best_m = 0;
  double best_value = -1e300;
  for (std::size_t m = 0; m < sel.own_candidates.size(); ++m) {
    const auto& resp = sel.responses[m];
    ASSERT_EQ(resp.candidates.size(), 50u);
    int best_n = 0;
    for (std::size_t n = 0; n < resp.candidates.size(); ++n) {
      if (g->rewards(sel.own_candidates[m], resp.candidates[n]).y >
          g->rewards(sel.own_candidates[m], resp.candidates[best_n]).y) {
        best_n = static_cast<int>(n);
      }
    }
    EXPECT_EQ(resp.best, best_n);
    const double v = g->rewards(sel.own_candidates[m], resp.candidates[best_n]).x;
    if (v > best_value) {
      best_value = v;
      best_m = static_cast<int>(m);
    }
  }
  EXPECT_EQ(sel.best, best_m);

  // The step moves an eta fraction of the way to the winner in learner coordinates.
  Rng replay(12);
  const Strategy next = sasa_update(c, ctx, replay);
  const Domain& d = g->domain(Player::kX);
  const double u = to_latent(x, d, Parametrization::kAuto)[0];
  const double target = sel.own_latent[static_cast<std::size_t>(best_m)][0];
  EXPECT_NEAR(next[0], from_latent(Strategy{u + 0.1 * (target - u)}, d, Parametrization::kAuto)[0],
              1e-12);
}

TEST(LearnerState, SeedsReproduceAndBoundsHold) {
  for (const auto& name : {"StagHunt", "ImpossibleMarket", "Tandem", "IPD"}) {
    const auto g = make_game(name);
    for (Rule rule : {Rule::kNL, Rule::kELOLA, Rule::kShepherd, Rule::kSaGa, Rule::kSaSa}) {
      LearnerConfig c = config(rule, 5.0, 5.0, Parametrization::kAuto);
      c.sigma = 3.0;
      c.n_samples = 4;
      c.m_samples = 4;
      c.inner_steps = 2;
      std::mt19937_64 init(13);
      const Strategy x0 = interior_point(g->domain(Player::kX), init);
      const Strategy y = interior_point(g->domain(Player::kY), init);
      LearnerState a(c, x0, 99), b(c, x0, 99);
      for (int t = 0; t < 20; ++t) {
        const Strategy na = a.propose(*g, Player::kX, y);
        const Strategy nb = b.propose(*g, Player::kX, y);
        ASSERT_EQ(na, nb) << name;
        ASSERT_TRUE(g->domain(Player::kX).contains(na)) << name << " " << to_string(rule);
        a.set_strategy(na);
        b.set_strategy(nb);
      }
    }
  }
}

TEST(LearnerState, DifferentSeedsDiffer) {
  const auto g = make_game("StagHunt");
  LearnerConfig c = config(Rule::kSaSa, 0.1, 0.0, Parametrization::kAuto);
  c.sigma = 2.0;
  LearnerState a(c, Strategy{0.5}, 1), b(c, Strategy{0.5}, 2);
  bool differ = false;
  for (int t = 0; t < 10 && !differ; ++t) {
    differ = a.propose(*g, Player::kX, Strategy{0.5}) != b.propose(*g, Player::kX, Strategy{0.5});
  }
  EXPECT_TRUE(differ);
}

TEST(Updates, DimensionMismatchIsAConfigError) {
  const auto g = make_game("IPD");
  const auto greedy = WelfareFunction::greedy();
  const Strategy x{0.5}, y(5, 0.5);
  const UpdateContext ctx{*g, Player::kX, x, y, greedy};
  EXPECT_THROW(nl_update(LearnerConfig{}, ctx), ConfigError);
}

TEST(RandomStrategy, DistributionsStayInTheDomain) {
  Rng rng(4);
  for (const auto& name : {"StagHunt", "IPD", "Tandem"}) {
    const auto g = make_game(name);
    for (InitDistribution d : {InitDistribution::kUniform, InitDistribution::kLogitNormal}) {
      for (int i = 0; i < 100; ++i) {
        EXPECT_TRUE(g->domain(Player::kX).contains(
            random_strategy(g->domain(Player::kX), Parametrization::kAuto, d, rng)));
      }
    }
  }
  EXPECT_EQ(parse_init_distribution("logit-normal"), InitDistribution::kLogitNormal);
  EXPECT_THROW(parse_init_distribution("gaussian"), ConfigError);
}

}  // namespace
}  // namespace welfare
