// mtdsim command line: generate graphs, run roaming-monitor simulations,
// sweep defense knobs, and score the online attacker against the
// clairvoyant optimum.
//
// Exit codes: 0 ok, 2 bad usage or invalid configuration, 3 runtime failure.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mtdsim/attack_graph.hpp"
#include "mtdsim/clairvoyant.hpp"
#include "mtdsim/defense.hpp"
#include "mtdsim/experiments.hpp"
#include "mtdsim/file_io.hpp"
#include "mtdsim/sim_engine.hpp"
#include "mtdsim/stats.hpp"

namespace {

using namespace mtdsim;

// Round-trippable decimal for a double.
std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Monitor roaming frequency is either off or once per whole number of
// steps; free-form reals would not correspond to any schedule.
std::optional<int> parse_frequency(const std::string& text) {
  if (text == "0") return std::nullopt;
  if (text == "1") return 1;
  if (text.rfind("1/", 0) == 0) {
    const std::string tail = text.substr(2);
    if (!tail.empty() &&
        tail.find_first_not_of("0123456789") == std::string::npos) {
      long r = std::stol(tail);
      if (r >= 1) return static_cast<int>(r);
    }
  }
  throw CLI::ValidationError("frequency",
                             "must be 0, 1, or 1/<positive integer>");
}

PlanBackend parse_backend(const std::string& name) {
  if (name == "dual-lp") return PlanBackend::DualLp;
  if (name == "greedy") return PlanBackend::GreedyRecursion;
  throw CLI::ValidationError("backend", "must be dual-lp or greedy");
}

void emit(const std::string& path, const std::string& content) {
  if (path == "-")
    std::cout << content;
  else
    write_file_atomic(path, content);
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "frequency,k,trials,successes,detections,timeouts,success_rate,"
         "ci_low,ci_high,seed\n";
  for (const SweepRow& r : rows) {
    out << fmt(r.frequency) << ',' << r.ids_count << ',' << r.stats.trials
        << ',' << r.stats.successes << ',' << r.stats.detections << ','
        << r.stats.timeouts << ',' << fmt(r.stats.success_rate) << ','
        << fmt(r.stats.ci_low) << ',' << fmt(r.stats.ci_high) << ','
        << r.seed << '\n';
  }
  return out.str();
}

struct SimOptions {
  std::string graph_path;
  int ids_count = 1;
  std::string frequency = "0";
  int horizon = 19;
  double risk_factor = 1.0;
  int t_max = 100;
  std::string backend = "dual-lp";
  long long trials = 1000;
  std::uint64_t seed = 0;
  int threads = 0;
};

void add_sim_options(CLI::App* cmd, SimOptions& o, bool with_defense) {
  cmd->add_option("--graph", o.graph_path, "graph JSON file")->required();
  if (with_defense) {
    cmd->add_option("--ids-count,-k", o.ids_count,
                    "number of roaming monitors");
    cmd->add_option("--frequency", o.frequency,
                    "roaming frequency: 0, 1, or 1/<steps>");
  }
  cmd->add_option("--horizon,-T", o.horizon, "attacker planning lookahead");
  cmd->add_option("--lambda", o.risk_factor, "risk factor (> 0)");
  cmd->add_option("--t-max", o.t_max, "episode step cap");
  cmd->add_option("--backend", o.backend, "planner backend: dual-lp|greedy");
  cmd->add_option("--trials", o.trials, "Monte Carlo episodes");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--threads", o.threads, "worker threads (0 = auto)");
}

SimParams sim_params(const SimOptions& o) {
  SimParams p;
  p.horizon = o.horizon;
  p.risk_factor = o.risk_factor;
  p.t_max = o.t_max;
  p.backend = parse_backend(o.backend);
  return p;
}

DefenseConfig defense_config(const AttackGraph& g, const SimOptions& o) {
  DefenseConfig cfg;
  cfg.ids_count = o.ids_count;
  cfg.resample_period = parse_frequency(o.frequency);
  cfg.candidates = g.ids_candidates();
  cfg.validate();
  return cfg;
}

int cmd_gen_graph(int nodes, int out_degree, double p, int pool,
                  std::uint64_t seed, const std::string& out_path) {
  AttackGraph g = generate_synthetic(nodes, out_degree, p, pool, seed);
  emit(out_path, serialize_graph(g));
  if (out_path != "-") {
    std::cout << "wrote " << out_path << ": " << g.node_count() << " nodes, "
              << "initial=" << g.initial_node()
              << " target=" << g.target_node() << " distance=";
    auto d = hop_distance(g, g.initial_node(), g.target_node());
    std::cout << (d ? std::to_string(*d) : std::string("inf")) << "\n";
  }
  return 0;
}

int cmd_simulate(const SimOptions& o, const std::string& out_path,
                 const std::string& dump_path, long long dump_episode) {
  AttackGraph g = load_graph_file(o.graph_path);
  DefenseConfig cfg = defense_config(g, o);
  MonteCarloParams mc;
  mc.sim = sim_params(o);
  mc.trials = o.trials;
  mc.seed = o.seed;
  mc.threads = o.threads;
  MonteCarloStats stats = run_monte_carlo(g, cfg, mc);
  std::cout << "trials=" << stats.trials << " successes=" << stats.successes
            << " detections=" << stats.detections
            << " timeouts=" << stats.timeouts
            << " success_rate=" << fmt(stats.success_rate) << " ci95=["
            << fmt(stats.ci_low) << "," << fmt(stats.ci_high) << "]\n";
  if (!out_path.empty()) {
    SweepRow row;
    row.frequency = cfg.frequency();
    row.ids_count = cfg.ids_count;
    row.resample_period = cfg.resample_period;
    row.seed = o.seed;
    row.stats = stats;
    emit(out_path, sweep_csv({row}));
  }
  if (!dump_path.empty()) {
    const std::uint64_t i = static_cast<std::uint64_t>(dump_episode);
    IdsSchedule sched =
        build_schedule(cfg, mc.sim.t_max, derive_seed(o.seed, i));
    Rng rng(derive_seed(o.seed, i + kAttackerStreamOffset));
    EpisodeResult ep = run_episode(g, sched, mc.sim, rng);
    emit(dump_path, format_trajectory(ep));
  }
  return 0;
}

int cmd_sweep(const SimOptions& o, const std::vector<std::string>& frequencies,
              const std::vector<int>& counts, const std::string& out_path) {
  AttackGraph g = load_graph_file(o.graph_path);
  if (frequencies.empty() == counts.empty())
    throw CLI::ValidationError(
        "sweep", "give exactly one of --frequencies / --counts");
  SweepResult result;
  if (!frequencies.empty()) {
    std::vector<std::optional<int>> periods;
    for (const std::string& f : frequencies)
      periods.push_back(parse_frequency(f));
    result = sweep_frequency(g, o.ids_count, periods, sim_params(o), o.trials,
                             o.seed);
  } else {
    result = sweep_ids_count(g, counts, parse_frequency(o.frequency),
                             sim_params(o), o.trials, o.seed);
  }
  emit(out_path, sweep_csv(result.rows));
  for (const SweepRow& r : result.rows)
    std::cout << "frequency=" << fmt(r.frequency) << " k=" << r.ids_count
              << " success_rate=" << fmt(r.stats.success_rate) << " ci95=["
              << fmt(r.stats.ci_low) << "," << fmt(r.stats.ci_high) << "]\n";
  return 0;
}

int cmd_regret(const SimOptions& o, std::vector<int> initial_states,
               int eval_horizon, int schedule_count, long long mc_trials,
               const std::string& out_path) {
  AttackGraph g = load_graph_file(o.graph_path);
  DefenseConfig cfg = defense_config(g, o);
  if (initial_states.empty()) initial_states = {g.initial_node()};
  std::vector<RegretStudyRow> rows = distance_regret_study(
      g, initial_states, cfg, o.horizon, o.risk_factor, eval_horizon,
      parse_backend(o.backend), schedule_count, o.seed);
  std::ostringstream csv;
  csv << "initial_state,distance,schedule_index,optimal_value,online_value,"
         "regret,optimal_success,online_success\n";
  for (const RegretStudyRow& r : rows) {
    csv << r.initial_state << ','
        << (r.distance ? std::to_string(*r.distance) : std::string("inf"))
        << ',' << r.schedule_index << ',' << fmt(r.report.optimal_value)
        << ',' << fmt(r.report.online_value) << ',' << fmt(r.report.regret)
        << ',' << fmt(r.report.optimal_success) << ','
        << fmt(r.report.online_success) << '\n';
  }
  emit(out_path, csv.str());

  double worst = 0.0, sum = 0.0;
  for (const RegretStudyRow& r : rows) {
    worst = std::max(worst, r.report.regret);
    sum += r.report.regret;
  }
  std::cout << "rows=" << rows.size() << " mean_regret=" << fmt(sum / rows.size())
            << " max_regret=" << fmt(worst) << "\n";

  // Outcome-vs-distance association from real episodes, grouped by hop
  // distance of the start state.
  MonteCarloParams mc;
  mc.sim = sim_params(o);
  mc.trials = mc_trials;
  mc.seed = derive_seed(o.seed, 0x5eedULL);
  mc.threads = o.threads;
  SuccessTable table = success_by_initial(g, cfg, initial_states, mc);
  std::map<std::string, std::pair<long long, long long>> by_distance;
  for (size_t i = 0; i < table.initial_states.size(); ++i) {
    std::string key = table.distances[i]
                          ? std::to_string(*table.distances[i])
                          : std::string("inf");
    by_distance[key].first += table.counts[i][0];
    by_distance[key].second += table.counts[i][1];
  }
  for (const auto& [key, wl] : by_distance)
    std::cout << "distance=" << key << " wins=" << wl.first
              << " losses=" << wl.second << "\n";
  if (by_distance.size() >= 2) {
    std::vector<std::vector<long long>> counts;
    for (const auto& [key, wl] : by_distance)
      counts.push_back({wl.first, wl.second});
    try {
      ChiSquaredResult chi = chi_squared_independence(counts);
      std::cout << "chi_squared=" << fmt(chi.statistic) << " dof=" << chi.dof
                << " p_value=" << fmt(chi.p_value) << "\n";
    } catch (const std::invalid_argument&) {
      std::cout << "chi_squared skipped (degenerate margins)\n";
    }
  } else {
    std::cout << "chi_squared skipped (single distance class)\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"roaming-monitor defense simulator"};
  app.require_subcommand(1);

  // gen-graph
  int gg_nodes = 20, gg_degree = 3, gg_pool = 10;
  double gg_p = 0.9;
  std::uint64_t gg_seed = 0;
  std::string gg_out = "-";
  CLI::App* gen = app.add_subcommand("gen-graph", "generate a synthetic graph");
  gen->add_option("--nodes", gg_nodes, "node count");
  gen->add_option("--out-degree", gg_degree, "max exploits per node");
  gen->add_option("--p", gg_p, "exploit success probability");
  gen->add_option("--ids-pool", gg_pool, "monitor candidate pool size");
  gen->add_option("--seed", gg_seed, "generation seed");
  gen->add_option("--out,-o", gg_out, "output path, - for stdout");

  // simulate
  SimOptions sim_o;
  std::string sim_out, sim_dump;
  long long sim_episode = 0;
  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo episode runs");
  add_sim_options(sim, sim_o, true);
  sim->add_option("--out,-o", sim_out, "write one-row CSV here");
  sim->add_option("--dump-trajectory", sim_dump,
                  "write one episode's trajectory here");
  sim->add_option("--episode", sim_episode,
                  "which episode index to dump (default 0)");

  // sweep
  SimOptions sweep_o;
  std::vector<std::string> sweep_freqs;
  std::vector<int> sweep_counts;
  std::string sweep_out = "sweep.csv";
  CLI::App* sweep = app.add_subcommand("sweep", "sweep a defense knob");
  add_sim_options(sweep, sweep_o, true);
  sweep->add_option("--frequencies", sweep_freqs,
                    "frequency values to sweep (0, 1, or 1/<steps>)")
      ->delimiter(',');
  sweep->add_option("--counts", sweep_counts, "monitor counts to sweep")
      ->delimiter(',');
  sweep->add_option("--out,-o", sweep_out, "output CSV path");

  // regret
  SimOptions reg_o;
  std::vector<int> reg_states;
  int reg_eval = 19, reg_schedules = 20;
  long long reg_mc_trials = 1000;
  std::string reg_out = "regret.csv";
  CLI::App* reg = app.add_subcommand(
      "regret", "online attacker vs clairvoyant optimum");
  add_sim_options(reg, reg_o, true);
  reg->add_option("--initial-states", reg_states,
                  "start states (default: the graph's initial node)")
      ->delimiter(',');
  reg->add_option("--eval-horizon", reg_eval, "evaluation truncation");
  reg->add_option("--schedules", reg_schedules, "number of sampled schedules");
  reg->add_option("--mc-trials", reg_mc_trials,
                  "episodes per start for the outcome table");
  reg->add_option("--out,-o", reg_out, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed())
      return cmd_gen_graph(gg_nodes, gg_degree, gg_p, gg_pool, gg_seed,
                           gg_out);
    if (sim->parsed())
      return cmd_simulate(sim_o, sim_out, sim_dump, sim_episode);
    if (sweep->parsed())
      return cmd_sweep(sweep_o, sweep_freqs, sweep_counts, sweep_out);
    if (reg->parsed())
      return cmd_regret(reg_o, reg_states, reg_eval, reg_schedules,
                        reg_mc_trials, reg_out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const GraphParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const GraphValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
