// Python bindings for the simulator core.  Thin: structs map to attribute
// holders, free functions keep their C++ names, randomness stays seed-based.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mtdsim/attack_graph.hpp"
#include "mtdsim/clairvoyant.hpp"
#include "mtdsim/defense.hpp"
#include "mtdsim/experiments.hpp"
#include "mtdsim/rng.hpp"
#include "mtdsim/sim_engine.hpp"
#include "mtdsim/stats.hpp"

namespace py = pybind11;
using namespace mtdsim;

PYBIND11_MODULE(_core, m) {
  m.doc() = "roaming-monitor defense simulator core";

  py::register_exception<GraphParseError>(m, "GraphParseError",
                                          PyExc_ValueError);
  py::register_exception<GraphValidationError>(m, "GraphValidationError",
                                               PyExc_ValueError);

  py::class_<Exploit>(m, "Exploit")
      .def(py::init([](int target, double success_prob) {
             return Exploit{target, success_prob};
           }),
           py::arg("target"), py::arg("success_prob"))
      .def_readonly("target", &Exploit::target)
      .def_readonly("success_prob", &Exploit::success_prob)
      .def("__repr__", [](const Exploit& e) {
        return "Exploit(target=" + std::to_string(e.target) +
               ", success_prob=" + std::to_string(e.success_prob) + ")";
      });

  py::class_<AttackGraph>(m, "AttackGraph")
      .def(py::init<int, std::vector<std::vector<Exploit>>, int, int,
                    std::vector<int>>(),
           py::arg("node_count"), py::arg("exploits"), py::arg("initial"),
           py::arg("target"), py::arg("ids_candidates"))
      .def_property_readonly("node_count", &AttackGraph::node_count)
      .def_property_readonly("initial_node", &AttackGraph::initial_node)
      .def_property_readonly("target_node", &AttackGraph::target_node)
      .def_property_readonly("ids_candidates", &AttackGraph::ids_candidates)
      .def("exploits_at", &AttackGraph::exploits_at, py::arg("node"))
      .def("with_initial", &AttackGraph::with_initial, py::arg("node"))
      .def("__eq__",
           [](const AttackGraph& a, const AttackGraph& b) { return a == b; })
      .def("__repr__", [](const AttackGraph& g) {
        return "AttackGraph(node_count=" + std::to_string(g.node_count()) +
               ", initial=" + std::to_string(g.initial_node()) +
               ", target=" + std::to_string(g.target_node()) + ")";
      });

  m.def("parse_graph", &parse_graph, py::arg("text"));
  m.def("serialize_graph", &serialize_graph, py::arg("graph"));
  m.def("load_graph_file", &load_graph_file, py::arg("path"));
  m.def("save_graph_file", &save_graph_file, py::arg("graph"), py::arg("path"));
  m.def("generate_synthetic", &generate_synthetic, py::arg("node_count"),
        py::arg("out_degree"), py::arg("success_prob"),
        py::arg("ids_pool_size"), py::arg("seed"));
  m.def("hop_distance", &hop_distance, py::arg("graph"), py::arg("from_node"),
        py::arg("to_node"));
  m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("index"));

  py::class_<DefenseConfig>(m, "DefenseConfig")
      .def(py::init([](int ids_count, std::optional<int> resample_period,
                       std::vector<int> candidates) {
             DefenseConfig cfg;
             cfg.ids_count = ids_count;
             cfg.resample_period = resample_period;
             cfg.candidates = std::move(candidates);
             cfg.validate();
             return cfg;
           }),
           py::arg("ids_count"), py::arg("resample_period"),
           py::arg("candidates"))
      .def_readwrite("ids_count", &DefenseConfig::ids_count)
      .def_readwrite("resample_period", &DefenseConfig::resample_period)
      .def_readwrite("candidates", &DefenseConfig::candidates)
      .def_property_readonly("frequency", &DefenseConfig::frequency);

  py::class_<IdsSchedule>(m, "IdsSchedule")
      .def_readonly("placements", &IdsSchedule::placements)
      .def_property_readonly("horizon", &IdsSchedule::horizon)
      .def("at", &IdsSchedule::at, py::arg("t"))
      .def("contains", &IdsSchedule::contains, py::arg("t"), py::arg("node"));

  m.def("build_schedule", &build_schedule, py::arg("config"),
        py::arg("horizon"), py::arg("seed"));

  py::enum_<PlanBackend>(m, "PlanBackend")
      .value("DUAL_LP", PlanBackend::DualLp)
      .value("GREEDY", PlanBackend::GreedyRecursion);

  py::class_<PlanningStep>(m, "PlanningStep")
      .def_readonly("observed_ids", &PlanningStep::observed_ids)
      .def_readonly("time", &PlanningStep::time)
      .def_readonly("horizon", &PlanningStep::horizon)
      .def_readonly("value", &PlanningStep::value)
      .def(
          "first_step",
          [](const PlanningStep& ps, int state) {
            return ps.policy.action_probs.at(0).at(state);
          },
          py::arg("state"),
          "action distribution the plan prescribes now at `state`");

  m.def("plan_step", &plan_step, py::arg("graph"), py::arg("observed_ids"),
        py::arg("current_state"), py::arg("horizon"), py::arg("risk_factor"),
        py::arg("backend"), py::arg("time") = 0);

  py::enum_<Outcome>(m, "Outcome")
      .value("SUCCESS", Outcome::Success)
      .value("DETECTED", Outcome::Detected)
      .value("TIMEOUT", Outcome::Timeout);

  py::class_<SimParams>(m, "SimParams")
      .def(py::init<>())
      .def_readwrite("horizon", &SimParams::horizon)
      .def_readwrite("risk_factor", &SimParams::risk_factor)
      .def_readwrite("t_max", &SimParams::t_max)
      .def_readwrite("backend", &SimParams::backend);

  py::class_<EpisodeResult>(m, "EpisodeResult")
      .def_readonly("outcome", &EpisodeResult::outcome)
      .def_readonly("outcome_time", &EpisodeResult::outcome_time)
      .def_readonly("seed", &EpisodeResult::seed)
      .def_property_readonly("steps",
                             [](const EpisodeResult& ep) {
                               return ep.trajectory.size();
                             })
      .def("trajectory_text",
           [](const EpisodeResult& ep) { return format_trajectory(ep); });

  m.def(
      "run_episode",
      [](const AttackGraph& g, const IdsSchedule& schedule,
         const SimParams& params, std::uint64_t seed) {
        return run_episode(g, schedule, params, Rng(seed));
      },
      py::arg("graph"), py::arg("schedule"), py::arg("params"),
      py::arg("seed"));

  py::class_<MonteCarloStats>(m, "MonteCarloStats")
      .def_readonly("trials", &MonteCarloStats::trials)
      .def_readonly("successes", &MonteCarloStats::successes)
      .def_readonly("detections", &MonteCarloStats::detections)
      .def_readonly("timeouts", &MonteCarloStats::timeouts)
      .def_readonly("success_rate", &MonteCarloStats::success_rate)
      .def_readonly("ci_low", &MonteCarloStats::ci_low)
      .def_readonly("ci_high", &MonteCarloStats::ci_high);

  py::class_<MonteCarloParams>(m, "MonteCarloParams")
      .def(py::init<>())
      .def_readwrite("sim", &MonteCarloParams::sim)
      .def_readwrite("trials", &MonteCarloParams::trials)
      .def_readwrite("seed", &MonteCarloParams::seed)
      .def_readwrite("threads", &MonteCarloParams::threads);

  m.def("run_monte_carlo", &run_monte_carlo, py::arg("graph"),
        py::arg("config"), py::arg("params"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<RegretReport>(m, "RegretReport")
      .def_readonly("eval_horizon", &RegretReport::eval_horizon)
      .def_readonly("optimal_value", &RegretReport::optimal_value)
      .def_readonly("online_value", &RegretReport::online_value)
      .def_readonly("regret", &RegretReport::regret)
      .def_readonly("optimal_success", &RegretReport::optimal_success)
      .def_readonly("online_success", &RegretReport::online_success);

  m.def(
      "dynamic_regret",
      [](const AttackGraph& g, const IdsSchedule& schedule, int plan_horizon,
         double risk_factor, int eval_horizon, PlanBackend backend) {
        return dynamic_regret(g, schedule, plan_horizon, risk_factor,
                              eval_horizon, backend);
      },
      py::arg("graph"), py::arg("schedule"), py::arg("plan_horizon"),
      py::arg("risk_factor"), py::arg("eval_horizon"), py::arg("backend"),
      py::call_guard<py::gil_scoped_release>());

  py::class_<RegretStudyRow>(m, "RegretStudyRow")
      .def_readonly("initial_state", &RegretStudyRow::initial_state)
      .def_readonly("distance", &RegretStudyRow::distance)
      .def_readonly("schedule_index", &RegretStudyRow::schedule_index)
      .def_readonly("report", &RegretStudyRow::report);

  m.def("distance_regret_study", &distance_regret_study, py::arg("graph"),
        py::arg("initial_states"), py::arg("config"), py::arg("plan_horizon"),
        py::arg("risk_factor"), py::arg("eval_horizon"), py::arg("backend"),
        py::arg("schedule_count"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("frequency", &SweepRow::frequency)
      .def_readonly("ids_count", &SweepRow::ids_count)
      .def_readonly("resample_period", &SweepRow::resample_period)
      .def_readonly("seed", &SweepRow::seed)
      .def_readonly("stats", &SweepRow::stats);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("rows", &SweepResult::rows);

  m.def("sweep_frequency", &sweep_frequency, py::arg("graph"),
        py::arg("ids_count"), py::arg("periods"), py::arg("sim"),
        py::arg("trials"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());
  m.def("sweep_ids_count", &sweep_ids_count, py::arg("graph"),
        py::arg("counts"), py::arg("period"), py::arg("sim"), py::arg("trials"),
        py::arg("seed"), py::call_guard<py::gil_scoped_release>());

  py::class_<ChiSquaredResult>(m, "ChiSquaredResult")
      .def_readonly("statistic", &ChiSquaredResult::statistic)
      .def_readonly("dof", &ChiSquaredResult::dof)
      .def_readonly("p_value", &ChiSquaredResult::p_value);

  m.def("chi_squared_independence", &chi_squared_independence,
        py::arg("table"));
  m.def("wilson_interval", &wilson_interval, py::arg("successes"),
        py::arg("trials"), py::arg("confidence") = 0.95);

  m.attr("__version__") = "0.1.0";
}
