#include "welfare/learners.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <utility>

namespace welfare {

namespace {

constexpr std::array<std::pair<Rule, std::string_view>, 7> kRuleNames = {{
    {Rule::kNL, "nl"},
    {Rule::kLookAhead, "lookahead"},
    {Rule::kELOLA, "elola"},
    {Rule::kLOLA, "lola"},
    {Rule::kShepherd, "shepherd"},
    {Rule::kSaGa, "saga"},
    {Rule::kSaSa, "sasa"},
}};

// Map between one player's strategies and its learner coordinates.
struct Chart {
  const Domain* dom;
  bool logit;

  Chart(const Domain& d, Parametrization p) : dom(&d), logit(uses_logit(p, d)) {}

  template <class T>
  T strategy(const T& u, std::size_t k) const {
    const Interval& b = dom->bounds[k];
    if (logit) return T(b.lo) + (b.hi - b.lo) * sigmoid(u);
    return clamp_branch(u, b.lo, b.hi);
  }

  // Applied after every step taken in learner coordinates.
  template <class T>
  T normalize(const T& u, std::size_t k) const {
    if (logit) return clamp_branch(u, -kLatentLimit, kLatentLimit);
    return clamp_branch(u, dom->bounds[k].lo, dom->bounds[k].hi);
  }

  double latent(double s, std::size_t k) const {
    const Interval& b = dom->bounds[k];
    if (!logit) return std::clamp(s, b.lo, b.hi);
    const double t = (s - b.lo) / (b.hi - b.lo);
    return std::clamp(std::log(t) - std::log1p(-t), -kLatentLimit, kLatentLimit);
  }

  template <class T>
  std::vector<T> strategy(std::span<const T> u) const {
    std::vector<T> out(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) out[k] = strategy(u[k], k);
    return out;
  }

  Strategy latent(std::span<const double> s) const {
    Strategy out(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) out[k] = latent(s[k], k);
    return out;
  }
};

// Own and opponent charts plus the current point in learner coordinates.
struct Frame {
  Chart own;
  Chart opp;
  Strategy u;  // own, latent
  Strategy v;  // opponent, latent

  Frame(const LearnerConfig& cfg, const UpdateContext& ctx)
      : own(ctx.game.domain(ctx.self), cfg.parametrization),
        opp(ctx.game.domain(other(ctx.self)), cfg.parametrization),
        u(own.latent(ctx.own)),
        v(opp.latent(ctx.opponent)) {}
};

template <class T>
std::vector<T> lift(std::span<const double> s) {
  return std::vector<T>(s.begin(), s.end());
}

// Rewards in game order for `self` playing `own` against `opp`.
template <class T>
RewardPair<T> play(const Game& game, Player self, std::span<const T> own, std::span<const T> opp) {
  return self == Player::kX ? game.rewards(own, opp) : game.rewards(opp, own);
}

template <class T>
T welfare_at(const UpdateContext& ctx, std::span<const T> own, std::span<const T> opp) {
  const RewardPair<T> r = play<T>(ctx.game, ctx.self, own, opp);
  return ctx.welfare.value(r.x, r.y, ctx.self);
}

// One greedy ascent step of the opponent in its learner coordinates, given
// our strategy x: normalize(v + alpha * d R^opp(x, S(v)) / dv).
template <class T>
std::vector<T> lookahead(const Game& game, Player self, const Chart& chart,
                         std::span<const T> x, std::span<const T> v, double alpha) {
  using D = Dual<T>;
  std::vector<D> xd, vd;
  for (const T& a : x) xd.emplace_back(a, T(0.0));
  for (const T& a : v) vd.emplace_back(a, T(0.0));
  std::vector<T> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    vd[k].d = T(1.0);
    const std::vector<D> yd = chart.strategy<D>(vd);
    const T g = play<D>(game, self, xd, yd).of(other(self)).d;
    vd[k].d = T(0.0);
    out[k] = chart.normalize(T(v[k] + alpha * g), k);
  }
  return out;
}

// Gradient of the own welfare with respect to the opponent strategy.
template <class T>
std::vector<T> welfare_gradient_opp(const UpdateContext& ctx, std::span<const T> own,
                                    std::span<const T> opp) {
  using D = Dual<T>;
  std::vector<D> o, p;
  for (const T& a : own) o.emplace_back(a, T(0.0));
  for (const T& a : opp) p.emplace_back(a, T(0.0));
  std::vector<T> grad(opp.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k].d = T(1.0);
    const RewardPair<D> r = play<D>(ctx.game, ctx.self, o, p);
    grad[k] = ctx.welfare.value(r.x, r.y, ctx.self).d;
    p[k].d = T(0.0);
  }
  return grad;
}

inline double with_primal(double, double p) { return p; }
template <class T>
Dual<T> with_primal(const Dual<T>& x, double p) {
  return {with_primal(x.v, p), x.d};
}

// Opponent strategy after `steps` lookahead steps from latent v0. Where the
// latent value ends where it started, the primal is the opponent's actual
// strategy rather than its round trip through the chart.
template <class T>
std::vector<T> unrolled_response(const LearnerConfig& cfg, const UpdateContext& ctx,
                                 const Chart& chart, std::span<const T> x,
                                 std::span<const double> v0, int steps) {
  std::vector<T> v = lift<T>(v0);
  for (int s = 0; s < steps; ++s) v = lookahead<T>(ctx.game, ctx.self, chart, x, v, cfg.alpha);
  std::vector<T> y = chart.strategy<T>(v);
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (primal(v[k]) == v0[k]) y[k] = with_primal(y[k], ctx.opponent[k]);
  }
  return y;
}

// Opponent model that does not depend on the own strategy being
// differentiated, as a strategy. Empty when the rule's response moves with it.
Strategy frozen_response(const LearnerConfig& cfg, const UpdateContext& ctx, const Frame& f,
                         std::span<const double> sampled) {
  const Strategy x = f.own.strategy<double>(f.u);
  switch (cfg.rule) {
    case Rule::kNL:
      return unrolled_response<double>(cfg, ctx, f.opp, x, f.v, 0);
    case Rule::kLookAhead:
      return unrolled_response<double>(cfg, ctx, f.opp, x, f.v, 1);
    case Rule::kShepherd:
      if (cfg.unroll_gradient) return {};
      return unrolled_response<double>(cfg, ctx, f.opp, x, f.v, cfg.inner_steps);
    case Rule::kSaGa:
      if (sampled.size() != ctx.opponent.size()) {
        throw ConfigError("saga objective needs the sampled opponent response");
      }
      return Strategy(sampled.begin(), sampled.end());
    case Rule::kELOLA:
    case Rule::kLOLA:
      return {};
    case Rule::kSaSa:
      throw ConfigError("sasa has no gradient objective");
  }
  return {};
}

template <class T>
T objective(const LearnerConfig& cfg, const UpdateContext& ctx, const Frame& f,
            std::span<const T> u, const Strategy& frozen) {
  const std::vector<T> x = f.own.strategy<T>(u);
  switch (cfg.rule) {
    case Rule::kELOLA: {
      const std::vector<T> yhat = unrolled_response<T>(cfg, ctx, f.opp, x, f.v, 1);
      return welfare_at<T>(ctx, x, yhat);
    }
    case Rule::kLOLA: {
      const std::vector<T> y0 = unrolled_response<T>(cfg, ctx, f.opp, x, f.v, 0);
      const std::vector<T> yhat = unrolled_response<T>(cfg, ctx, f.opp, x, f.v, 1);
      const std::vector<T> g = welfare_gradient_opp<T>(ctx, x, y0);
      T j = welfare_at<T>(ctx, x, y0);
      for (std::size_t k = 0; k < y0.size(); ++k) j += (yhat[k] - y0[k]) * g[k];
      return j;
    }
    case Rule::kShepherd:
      if (cfg.unroll_gradient) {
        const std::vector<T> yhat =
            unrolled_response<T>(cfg, ctx, f.opp, x, f.v, cfg.inner_steps);
        return welfare_at<T>(ctx, x, yhat);
      }
      [[fallthrough]];
    default: {
      const std::vector<T> yhat = lift<T>(frozen);
      return welfare_at<T>(ctx, x, yhat);
    }
  }
}

void check_context(const UpdateContext& ctx) {
  if (ctx.own.size() != ctx.game.dim(ctx.self) ||
      ctx.opponent.size() != ctx.game.dim(other(ctx.self))) {
    throw ConfigError(std::string(ctx.game.name()) + ": strategy dimension mismatch");
  }
}

Strategy gradient_with(const LearnerConfig& cfg, const UpdateContext& ctx, const Frame& f,
                       std::span<const double> at, const Strategy& frozen) {
  std::vector<Dual1> u = lift<Dual1>(at);
  Strategy g(at.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i].d = 1.0;
    g[i] = objective<Dual1>(cfg, ctx, f, u, frozen).d;
    u[i].d = 0.0;
  }
  return g;
}

// Maps the stepped latent point back to a strategy. Coordinates whose latent
// value did not move keep the caller's strategy bit for bit.
Strategy settle(const UpdateContext& ctx, const Frame& f, const Strategy& next_u) {
  Strategy out(ctx.own.begin(), ctx.own.end());
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (next_u[k] != f.u[k]) out[k] = f.own.strategy(next_u[k], k);
  }
  return project(out, ctx.game.domain(ctx.self));
}

Strategy ascent_step(const LearnerConfig& cfg, const UpdateContext& ctx,
                     std::span<const double> sampled = {}) {
  check_context(ctx);
  const Frame f(cfg, ctx);
  const Strategy frozen = frozen_response(cfg, ctx, f, sampled);
  const Strategy g = gradient_with(cfg, ctx, f, f.u, frozen);
  Strategy next = f.u;
  for (std::size_t i = 0; i < next.size(); ++i) next[i] = f.own.normalize(next[i] + cfg.eta * g[i], i);
  return settle(ctx, f, next);
}

LearnerConfig with_rule(LearnerConfig cfg, Rule rule) {
  cfg.rule = rule;
  return cfg;
}

// normalize(u + sigma * eps) with eps ~ N(0, I), in learner coordinates.
Strategy perturb(std::span<const double> u, double sigma, const Chart& chart, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Strategy out(u.begin(), u.end());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = chart.normalize(out[k] + sigma * normal(rng), k);
  return out;
}

// Candidate strategy for a perturbed latent point; unperturbed coordinates
// keep the opponent's strategy bit for bit.
Strategy candidate(const Chart& chart, std::span<const double> lat, std::span<const double> v,
                   std::span<const double> strategy) {
  Strategy out(strategy.begin(), strategy.end());
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (lat[k] != v[k]) out[k] = chart.strategy(lat[k], k);
  }
  return out;
}

SampledResponse sample_from(const LearnerConfig& cfg, const Game& game, Player self,
                            const Chart& opp, std::span<const double> own,
                            std::span<const double> v, std::span<const double> opponent,
                            Rng& rng) {
  SampledResponse out;
  out.candidates.reserve(static_cast<std::size_t>(cfg.n_samples));
  out.values.reserve(static_cast<std::size_t>(cfg.n_samples));
  for (int n = 0; n < cfg.n_samples; ++n) {
    const Strategy lat = perturb(v, cfg.sigma, opp, rng);
    out.candidates.push_back(candidate(opp, lat, v, opponent));
    const Strategy& c = out.candidates.back();
    out.values.push_back(play<double>(game, self, own, c).of(other(self)));
    if (out.values.back() > out.values[static_cast<std::size_t>(out.best)]) out.best = n;
  }
  return out;
}

}  // namespace

std::string_view to_string(Rule rule) {
  for (const auto& [r, name] : kRuleNames) {
    if (r == rule) return name;
  }
  return "nl";
}

Rule parse_rule(std::string_view name) {
  for (const auto& [r, n] : kRuleNames) {
    if (n == name) return r;
  }
  throw ConfigError("unknown learning rule: " + std::string(name));
}

std::vector<std::string> rule_names() {
  std::vector<std::string> out;
  for (const auto& [r, n] : kRuleNames) out.emplace_back(n);
  return out;
}

std::string_view to_string(Parametrization p) {
  switch (p) {
    case Parametrization::kAuto:
      return "auto";
    case Parametrization::kClip:
      return "clip";
    case Parametrization::kLogit:
      return "logit";
  }
  return "auto";
}

Parametrization parse_parametrization(std::string_view name) {
  if (name == "auto") return Parametrization::kAuto;
  if (name == "clip") return Parametrization::kClip;
  if (name == "logit") return Parametrization::kLogit;
  throw ConfigError("unknown parametrization: " + std::string(name));
}

void LearnerConfig::validate() const {
  if (!(eta > 0.0)) throw ConfigError("eta must be positive");
  if (!(alpha >= 0.0)) throw ConfigError("alpha must be non-negative");
  if (!(sigma >= 0.0)) throw ConfigError("sigma must be non-negative");
  if (n_samples < 1) throw ConfigError("n must be at least 1");
  if (m_samples < 1) throw ConfigError("m must be at least 1");
  if (inner_steps < 1) throw ConfigError("inner steps must be at least 1");
}

Strategy project(std::span<const double> s, const Domain& domain) {
  if (s.size() != domain.dim()) throw ConfigError("projection: dimension mismatch");
  return domain.project(s);
}

bool uses_logit(Parametrization p, const Domain& domain) {
  switch (p) {
    case Parametrization::kClip:
      return false;
    case Parametrization::kLogit:
      return true;
    case Parametrization::kAuto:
      break;
  }
  return std::all_of(domain.bounds.begin(), domain.bounds.end(),
                     [](const Interval& b) { return b.lo == 0.0 && b.hi == 1.0; });
}

Strategy to_latent(std::span<const double> s, const Domain& domain, Parametrization p) {
  if (s.size() != domain.dim()) throw ConfigError("to_latent: dimension mismatch");
  return Chart(domain, p).latent(s);
}

Strategy from_latent(std::span<const double> u, const Domain& domain, Parametrization p) {
  if (u.size() != domain.dim()) throw ConfigError("from_latent: dimension mismatch");
  return Chart(domain, p).strategy<double>(u);
}

std::string_view to_string(InitDistribution d) {
  return d == InitDistribution::kUniform ? "uniform" : "logit-normal";
}

InitDistribution parse_init_distribution(std::string_view name) {
  if (name == "uniform") return InitDistribution::kUniform;
  if (name == "logit-normal") return InitDistribution::kLogitNormal;
  throw ConfigError("unknown init distribution: " + std::string(name));
}

Strategy random_strategy(const Domain& domain, Parametrization p, InitDistribution d, Rng& rng) {
  const Chart chart(domain, p);
  Strategy s(domain.dim());
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (d == InitDistribution::kLogitNormal && chart.logit) {
      std::normal_distribution<double> normal(0.0, 1.0);
      s[k] = chart.strategy(normal(rng), k);
    } else {
      std::uniform_real_distribution<double> u(domain.bounds[k].lo, domain.bounds[k].hi);
      s[k] = u(rng);
    }
  }
  return s;
}

Strategy opponent_lookahead(const LearnerConfig& cfg, const Game& game, Player self,
                            std::span<const double> own, std::span<const double> opponent) {
  const WelfareFunction greedy = WelfareFunction::greedy();
  const UpdateContext ctx{game, self, own, opponent, greedy};
  check_context(ctx);
  const Frame f(cfg, ctx);
  return unrolled_response<double>(cfg, ctx, f.opp, f.own.strategy<double>(f.u), f.v, 1);
}

Strategy nl_update(const LearnerConfig& cfg, const UpdateContext& ctx) {
  return ascent_step(with_rule(cfg, Rule::kNL), ctx);
}

Strategy lookahead_update(const LearnerConfig& cfg, const UpdateContext& ctx) {
  return ascent_step(with_rule(cfg, Rule::kLookAhead), ctx);
}

Strategy elola_update(const LearnerConfig& cfg, const UpdateContext& ctx) {
  return ascent_step(with_rule(cfg, Rule::kELOLA), ctx);
}

Strategy lola_update(const LearnerConfig& cfg, const UpdateContext& ctx) {
  return ascent_step(with_rule(cfg, Rule::kLOLA), ctx);
}

Strategy shepherd_update(const LearnerConfig& cfg, const UpdateContext& ctx) {
  return ascent_step(with_rule(cfg, Rule::kShepherd), ctx);
}

SampledResponse sample_response(const LearnerConfig& cfg, const Game& game, Player self,
                                std::span<const double> own, std::span<const double> opponent,
                                Rng& rng) {
  const Chart opp(game.domain(other(self)), cfg.parametrization);
  const Strategy v = opp.latent(opponent);
  return sample_from(cfg, game, self, opp, own, v, opponent, rng);
}

Strategy saga_update(const LearnerConfig& cfg, const UpdateContext& ctx, Rng& rng) {
  check_context(ctx);
  const SampledResponse s = sample_response(cfg, ctx.game, ctx.self, ctx.own, ctx.opponent, rng);
  return ascent_step(with_rule(cfg, Rule::kSaGa), ctx, s.response());
}

SasaSelection sasa_select(const LearnerConfig& cfg, const UpdateContext& ctx, Rng& rng) {
  check_context(ctx);
  const Frame f(cfg, ctx);
  SasaSelection out;
  for (int m = 0; m < cfg.m_samples; ++m) {
    out.own_latent.push_back(perturb(f.u, cfg.sigma, f.own, rng));
    out.own_candidates.push_back(candidate(f.own, out.own_latent.back(), f.u, ctx.own));
    const Strategy& x = out.own_candidates.back();
    out.responses.push_back(
        sample_from(cfg, ctx.game, ctx.self, f.opp, x, f.v, ctx.opponent, rng));
    out.values.push_back(welfare_at<double>(ctx, x, out.responses.back().response()));
    if (out.values.back() > out.values[static_cast<std::size_t>(out.best)]) out.best = m;
  }
  return out;
}

Strategy sasa_update(const LearnerConfig& cfg, const UpdateContext& ctx, Rng& rng) {
  const SasaSelection sel = sasa_select(cfg, ctx, rng);
  const Frame f(cfg, ctx);
  const Strategy& best = sel.own_latent[static_cast<std::size_t>(sel.best)];
  Strategy next = f.u;
  // (1 - eta) u + eta best, written so that best == u leaves u unchanged.
  for (std::size_t i = 0; i < next.size(); ++i) {
    next[i] = f.own.normalize(next[i] + cfg.eta * (best[i] - next[i]), i);
  }
  return settle(ctx, f, next);
}

Strategy update(const LearnerConfig& cfg, const UpdateContext& ctx, Rng& rng) {
  switch (cfg.rule) {
    case Rule::kSaGa:
      return saga_update(cfg, ctx, rng);
    case Rule::kSaSa:
      return sasa_update(cfg, ctx, rng);
    default:
      return ascent_step(cfg, ctx);
  }
}

double objective_value(const LearnerConfig& cfg, const UpdateContext& ctx,
                       std::span<const double> at, std::span<const double> sampled_response) {
  check_context(ctx);
  const Frame f(cfg, ctx);
  const Strategy frozen = frozen_response(cfg, ctx, f, sampled_response);
  return objective<double>(cfg, ctx, f, at, frozen);
}

Strategy objective_gradient(const LearnerConfig& cfg, const UpdateContext& ctx,
                            std::span<const double> at,
                            std::span<const double> sampled_response) {
  check_context(ctx);
  const Frame f(cfg, ctx);
  const Strategy frozen = frozen_response(cfg, ctx, f, sampled_response);
  return gradient_with(cfg, ctx, f, at, frozen);
}

LearnerState::LearnerState(LearnerConfig config, Strategy initial, std::uint64_t seed)
    : config_(config), strategy_(std::move(initial)), rng_(seed) {
  config_.validate();
}

Strategy LearnerState::propose(const Game& game, Player self, std::span<const double> opponent,
                               const WelfareFunction& wf) {
  const UpdateContext ctx{game, self, strategy_, opponent, wf};
  return update(config_, ctx, rng_);
}

}  // namespace welfare
