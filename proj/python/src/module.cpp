// Python bindings. Results that plotting code consumes cross the boundary as
// the same schema-1 JSON documents the CLI writes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "welfare/cli.hpp"
#include "welfare/equilibria.hpp"
#include "welfare/harness.hpp"
#include "welfare/welfuse.hpp"

namespace py = pybind11;
using namespace welfare;

namespace {

Player parse_player(const std::string& p) {
  if (p == "x") return Player::kX;
  if (p == "y") return Player::kY;
  throw ConfigError("player must be 'x' or 'y'");
}

LearnerConfig make_learner(const std::string& rule, double eta, double alpha, double sigma,
                           int n, int m, int inner_steps, bool unroll,
                           const std::string& param) {
  LearnerConfig c;
  c.rule = parse_rule(rule);
  c.eta = eta;
  c.alpha = alpha;
  c.sigma = sigma;
  c.n_samples = n;
  c.m_samples = m;
  c.inner_steps = inner_steps;
  c.unroll_gradient = unroll;
  c.parametrization = parse_parametrization(param);
  c.validate();
  return c;
}

py::dict solution_dict(const GridSolution& s) {
  py::dict d;
  d["index"] = s.index;
  d["strategy"] = s.strategy;
  d["response"] = s.response;
  d["objective"] = s.objective;
  d["rewards"] = py::make_tuple(s.rewards.x, s.rewards.y);
  return d;
}

ExperimentConfig experiment(const std::string& game, const LearnerConfig& lx,
                            std::optional<LearnerConfig> ly, int steps, int trials,
                            std::uint64_t seed, int threads) {
  ExperimentConfig c;
  c.game = game;
  c.learner_x = lx;
  c.learner_y = ly ? *ly : lx;
  c.steps = steps;
  c.trials = trials;
  c.seed = seed;
  c.threads = threads;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Welfare equilibria: games, grid solver, learners and WelFuSe";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  m.def("game_names", &game_names);
  m.def("rule_names", &rule_names);

  py::class_<Game, std::shared_ptr<Game>>(m, "Game")
      .def_property_readonly("name", [](const Game& g) { return std::string(g.name()); })
      .def("bounds",
           [](const Game& g, const std::string& p) {
             std::vector<std::pair<double, double>> out;
             for (const Interval& i : g.domain(parse_player(p)).bounds) out.emplace_back(i.lo, i.hi);
             return out;
           })
      .def("rewards",
           [](const Game& g, const Strategy& x, const Strategy& y) {
             const auto r = g.evaluate(x, y);
             return py::make_tuple(r.x, r.y);
           })
      .def("gradient", [](const Game& g, const std::string& p, const Strategy& x,
                          const Strategy& y) { return g.gradient(parse_player(p), x, y); });

  m.def(
      "make_game",
      [](const std::string& name, double gamma) {
        GameOptions o;
        o.ipd_gamma = gamma;
        return std::const_pointer_cast<Game>(make_game(name, o));
      },
      py::arg("name"), py::arg("gamma") = 0.96);

  py::class_<GameAnalysis>(m, "GameAnalysis")
      .def(py::init([](const std::string& game, int grid_points, int threads) {
             return std::make_unique<GameAnalysis>(make_game(game), grid_points, threads);
           }),
           py::arg("game"), py::arg("grid_points") = kDefaultGridPoints, py::arg("threads") = 1)
      .def("stackelberg",
           [](const GameAnalysis& a, const std::string& p) {
             return solution_dict(a.stackelberg(parse_player(p)));
           })
      .def("welfare_equilibrium",
           [](const GameAnalysis& a, const std::string& p, const std::string& tag) {
             return solution_dict(
                 a.welfare_equilibrium(parse_player(p), a.welfare(parse_welfare_tag(tag))));
           })
      .def("arrogance_penalty",
           [](const GameAnalysis& a, const std::string& p) {
             return a.arrogance_penalty(parse_player(p));
           })
      .def("is_coincidental", [](const GameAnalysis& a) { return a.is_coincidental(); })
      .def(
          "report_json",
          [](const GameAnalysis& a, const std::string& wx, const std::string& wy) {
            return to_json(we_profile_report(a, parse_welfare_tag(wx), parse_welfare_tag(wy)));
          },
          py::arg("welfare_x"), py::arg("welfare_y"));

  py::class_<LearnerConfig>(m, "LearnerConfig")
      .def(py::init(&make_learner), py::arg("rule") = "nl", py::arg("eta") = 0.1,
           py::arg("alpha") = 0.0, py::arg("sigma") = 1.0, py::arg("n") = 1, py::arg("m") = 1,
           py::arg("inner_steps") = 1, py::arg("unroll") = true, py::arg("param") = "auto")
      .def_property_readonly("rule", [](const LearnerConfig& c) { return std::string(to_string(c.rule)); })
      .def_readonly("eta", &LearnerConfig::eta)
      .def_readonly("alpha", &LearnerConfig::alpha)
      .def_readonly("sigma", &LearnerConfig::sigma);

  m.def(
      "run_trials",
      [](const std::string& game, const LearnerConfig& lx, std::optional<LearnerConfig> ly,
         int steps, int trials, std::uint64_t seed, int threads, const std::string& format) {
        const auto recs = run_trials(experiment(game, lx, ly, steps, trials, seed, threads));
        if (format == "csv") return trajectories_to_csv(recs);
        if (format != "json") throw ConfigError("format must be json or csv");
        return trajectories_to_json(recs);
      },
      py::arg("game"), py::arg("learner_x"), py::arg("learner_y") = py::none(),
      py::arg("steps") = 100, py::arg("trials") = 1, py::arg("seed") = 0, py::arg("threads") = 1,
      py::arg("format") = "json", "Independent trials as a trajectory document.");

  m.def(
      "phase_portrait",
      [](const std::string& game, const LearnerConfig& lx, std::optional<LearnerConfig> ly,
         int steps, int grid, std::uint64_t seed, int threads) {
        ExperimentConfig c = experiment(game, lx, ly, steps, 1, seed, threads);
        c.init = InitScheme::kGrid;
        c.init_grid = grid;
        return trajectories_to_json(phase_portrait(c));
      },
      py::arg("game"), py::arg("learner_x"), py::arg("learner_y") = py::none(),
      py::arg("steps") = 100, py::arg("grid") = 20, py::arg("seed") = 0, py::arg("threads") = 1);

  m.def(
      "welfuse",
      [](const std::string& game, const std::string& opponent, int episodes, int steps,
         int batch, const LearnerConfig& inner, std::uint64_t seed, int threads) {
        WelfuseConfig c;
        c.episodes = episodes;
        c.steps = steps;
        c.batch = batch;
        c.inner = inner;
        c.seed = seed;
        c.threads = threads;
        OpponentSpec o;
        o.kind = parse_opponent(opponent);
        return to_json(welfuse_run(c, o, *make_game(game)));
      },
      py::arg("game") = "ChickenGame", py::arg("opponent") = "nl", py::arg("episodes") = 3,
      py::arg("steps") = 1000, py::arg("batch") = 100,
      py::arg("inner") = make_learner("elola", 0.1, 25.0, 1.0, 1, 1, 1, true, "auto"),
      py::arg("seed") = 0, py::arg("threads") = 1);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"welfare"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
