#include "welfare/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "welfare/equilibria.hpp"
#include "welfare/harness.hpp"
#include "welfare/parallel.hpp"
#include "welfare/welfuse.hpp"

namespace welfare {

namespace {

using nlohmann::json;

struct Options {
  std::string game = "PrisonersDilemma";
  std::string rule = "nl";
  std::string rule_y;
  double eta = 0.1;
  double alpha = 0.0;
  double sigma = 1.0;
  int n = 1;
  int m = 1;
  int inner_steps = 1;
  bool unroll = true;
  std::string param = "auto";
  int steps = 100;
  int trials = 1;
  std::uint64_t seed = 0;
  int grid_points = kDefaultGridPoints;
  std::string welfare = "greedy";
  std::string welfare_y;
  int episodes = 3;
  int batch = 100;
  std::string opponent = "nl";
  std::string out;
  std::string format = "json";
  double gamma = 0.96;
  int threads = 1;
  int init_grid = 20;
  std::vector<double> x0;
  std::vector<double> y0;
  bool wall_clock = false;
  std::string init;  // empty: subcommand default
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::shared_ptr<const Game> game_from(const Options& o) {
  return make_game(o.game, GameOptions{.ipd_gamma = o.gamma});
}

LearnerConfig learner_from(const Options& o, const std::string& rule) {
  LearnerConfig c;
  c.rule = parse_rule(rule);
  c.eta = o.eta;
  c.alpha = o.alpha;
  c.sigma = o.sigma;
  c.n_samples = o.n;
  c.m_samples = o.m;
  c.inner_steps = o.inner_steps;
  c.unroll_gradient = o.unroll;
  c.parametrization = parse_parametrization(o.param);
  c.validate();
  return c;
}

ExperimentConfig experiment_from(const Options& o) {
  ExperimentConfig c;
  c.game = o.game;
  c.game_options.ipd_gamma = o.gamma;
  c.learner_x = learner_from(o, o.rule);
  c.learner_y = learner_from(o, o.rule_y.empty() ? o.rule : o.rule_y);
  c.welfare_x = parse_welfare_tag(o.welfare);
  c.welfare_y = o.welfare_y.empty() ? WelfareTag::kGreedy : parse_welfare_tag(o.welfare_y);
  c.steps = o.steps;
  c.trials = o.trials;
  c.seed = o.seed;
  c.threads = o.threads;
  c.init_grid = o.init_grid;
  if (!o.init.empty()) c.distribution = parse_init_distribution(o.init);
  if (!o.x0.empty() || !o.y0.empty()) {
    c.init = InitScheme::kFixed;
    c.init_x = o.x0;
    c.init_y = o.y0;
  }
  c.validate();
  return c;
}

json solution_summary(const GridSolution& s) {
  return {{"strategy", s.strategy},
          {"index", s.index},
          {"response", s.response},
          {"response_index", s.response_index},
          {"objective", s.objective},
          {"reward_x", s.rewards.x},
          {"reward_y", s.rewards.y}};
}

std::string solve_we(const Options& o) {
  const auto game = game_from(o);
  const GameAnalysis a(game, o.grid_points, o.threads);
  const WelfareTag tx = parse_welfare_tag(o.welfare);
  const WelfareTag ty = o.welfare_y.empty() ? tx : parse_welfare_tag(o.welfare_y);
  const GridSolution sx = a.welfare_equilibrium(Player::kX, a.welfare(tx));
  const GridSolution sy = a.welfare_equilibrium(Player::kY, a.welfare(ty));
  const RewardPair<double> r = a.rewards(sx.index, sy.index);
  json doc;
  doc["schema"] = 1;
  doc["kind"] = "we-solution";
  doc["game"] = std::string(game->name());
  doc["welfare_x"] = std::string(to_string(tx));
  doc["welfare_y"] = std::string(to_string(ty));
  doc["grid_points"] = o.grid_points;
  doc["x"] = solution_summary(sx);
  doc["y"] = solution_summary(sy);
  doc["profile"] = {{"x", sx.strategy}, {"y", sy.strategy}, {"reward_x", r.x}, {"reward_y", r.y}};
  return doc.dump(1) + "\n";
}

std::string classify(const Options& o) {
  const auto game = game_from(o);
  const GameAnalysis a(game, o.grid_points, o.threads);
  const auto [i, j] = a.stackelberg_profile();
  const RewardPair<double> r = a.rewards(i, j);
  const NormalizationConstants& n = a.normalization();
  json doc;
  doc["schema"] = 1;
  doc["kind"] = "classification";
  doc["game"] = std::string(game->name());
  doc["coincidental"] = a.is_coincidental();
  doc["stackelberg_profile"] = {
      {"x", a.grid(Player::kX)[i]}, {"y", a.grid(Player::kY)[j]}, {"reward_x", r.x},
      {"reward_y", r.y}};
  doc["baseline"] = {{"x", n.baseline.x}, {"y", n.baseline.y}};
  doc["arrogance_penalty"] = {{"x", n.penalty.x}, {"y", n.penalty.y}};
  return doc.dump(1) + "\n";
}

std::string report(const Options& o) {
  const auto game = game_from(o);
  const GameAnalysis a(game, o.grid_points, o.threads);
  const WelfareTag tx = parse_welfare_tag(o.welfare);
  const WelfareTag ty = o.welfare_y.empty() ? tx : parse_welfare_tag(o.welfare_y);
  return to_json(we_profile_report(a, tx, ty));
}

std::string trajectories(const std::vector<TrajectoryRecord>& records, const Options& o) {
  if (o.format == "csv") return trajectories_to_csv(records);
  return trajectories_to_json(records, o.wall_clock);
}

std::string welfuse(const Options& o) {
  const auto game = game_from(o);
  WelfuseConfig c;
  c.welfare_set.clear();
  for (const std::string& name : split_list(o.welfare)) {
    c.welfare_set.push_back(parse_welfare_tag(name));
  }
  c.episodes = o.episodes;
  c.steps = o.steps;
  c.batch = o.batch;
  c.inner = learner_from(o, o.rule);
  c.seed = o.seed;
  c.threads = o.threads;
  if (!o.init.empty()) c.reset = parse_init_distribution(o.init);
  if (!o.x0.empty()) c.init_x = o.x0;
  if (!o.y0.empty()) c.init_y = o.y0;
  OpponentSpec opp;
  opp.kind = parse_opponent(o.opponent);
  opp.learner = learner_from(o, o.rule_y.empty() ? "nl" : o.rule_y);
  return to_json(welfuse_run(c, opp, *game));
}

void emit(const std::string& text, const Options& o, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file: " + o.out);
  f << text;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Stackelberg strategies, welfare equilibria and learning dynamics"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file; keys go under a [subcommand] section");

  auto add_game = [&](CLI::App* s) {
    s->add_option("--game", o.game, "Catalog game name");
    s->add_option("--gamma", o.gamma, "IPD discount factor");
    s->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto add_grid = [&](CLI::App* s) {
    s->add_option("--grid-points", o.grid_points, "Grid points per player");
    s->add_option("--welfare", o.welfare, "Welfare function (x, or both)");
    s->add_option("--welfare-y", o.welfare_y, "Welfare function for y");
  };
  auto add_learner = [&](CLI::App* s) {
    s->add_option("--rule", o.rule, "Learning rule");
    s->add_option("--rule-y", o.rule_y, "Learning rule for y (default: --rule)");
    s->add_option("--eta", o.eta, "Learning rate");
    s->add_option("--alpha", o.alpha, "Opponent lookahead rate");
    s->add_option("--sigma", o.sigma, "Sampling noise");
    s->add_option("--n", o.n, "Opponent samples N");
    s->add_option("--m", o.m, "Own samples M");
    s->add_option("--inner-steps", o.inner_steps, "Shepherd inner steps");
    s->add_option("--unroll", o.unroll, "Shepherd: differentiate through the inner loop");
    s->add_option("--param", o.param, "Learner coordinates: auto, clip or logit");
    s->add_option("--steps", o.steps, "Update steps");
    s->add_option("--seed", o.seed, "Master seed");
    s->add_option("--x0", o.x0, "Initial x strategy")->delimiter(',');
    s->add_option("--y0", o.y0, "Initial y strategy")->delimiter(',');
    s->add_option("--init", o.init, "Random init: uniform or logit-normal")
        ->check(CLI::IsMember({"uniform", "logit-normal"}));
  };
  auto add_output = [&](CLI::App* s) {
    s->add_option("--out", o.out, "Output path (default stdout)");
    s->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  };

  CLI::App* list = app.add_subcommand("list-games", "Print catalog game names");
  add_output(list);

  CLI::App* solve = app.add_subcommand("solve-we", "Welfare-equilibrium strategies by grid search");
  add_game(solve);
  add_grid(solve);
  add_output(solve);

  CLI::App* cls = app.add_subcommand("classify", "Coincidental / non-coincidental classification");
  add_game(cls);
  cls->add_option("--grid-points", o.grid_points, "Grid points per player");
  add_output(cls);

  CLI::App* rep = app.add_subcommand("report", "Six-panel welfare-equilibrium report (JSON)");
  add_game(rep);
  add_grid(rep);
  add_output(rep);

  CLI::App* match = app.add_subcommand("run-match", "Simulate two learners");
  add_game(match);
  add_learner(match);
  add_output(match);
  match->add_option("--trials", o.trials, "Independent trials");
  match->add_option("--welfare", o.welfare, "Welfare function optimised by x");
  match->add_option("--welfare-y", o.welfare_y, "Welfare function optimised by y");
  match->add_flag("--wall-clock", o.wall_clock, "Include wall-clock time in JSON");

  CLI::App* phase = app.add_subcommand("phase-portrait", "Trajectories from a grid of inits");
  add_game(phase);
  add_learner(phase);
  add_output(phase);
  phase->add_option("--init-grid", o.init_grid, "Init points per axis");
  phase->add_option("--welfare", o.welfare, "Welfare function optimised by x");
  phase->add_option("--welfare-y", o.welfare_y, "Welfare function optimised by y");

  CLI::App* wf = app.add_subcommand("welfuse", "Welfare function search");
  add_game(wf);
  add_learner(wf);
  add_output(wf);
  wf->add_option("--welfare", o.welfare, "Comma-separated welfare set");
  wf->add_option("--episodes", o.episodes, "Episodes e");
  wf->add_option("--batch", o.batch, "Batch size b");
  wf->add_option("--opponent", o.opponent, "nl, self-play or frozen");
  wf->callback([&] {
    if (wf->count("--welfare") == 0) o.welfare = "greedy,egalitarian,fairness";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*list) {
      if (list->count("--format") > 0 && o.format == "json") {
        emit(json(game_names()).dump() + "\n", o, out);
      } else {
        std::string text;
        for (const std::string& n : game_names()) text += n + "\n";
        emit(text, o, out);
      }
    } else if (o.format == "csv" && !*match && !*phase) {
      throw ConfigError("csv output is only available for trajectories");
    } else if (*solve) {
      emit(solve_we(o), o, out);
    } else if (*cls) {
      emit(classify(o), o, out);
    } else if (*rep) {
      emit(report(o), o, out);
    } else if (*match) {
      emit(trajectories(run_trials(experiment_from(o)), o), o, out);
    } else if (*phase) {
      ExperimentConfig c = experiment_from(o);
      emit(trajectories(phase_portrait(c), o), o, out);
    } else if (*wf) {
      emit(welfuse(o), o, out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace welfare
