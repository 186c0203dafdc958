#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtdsim {

// One exploit edge out of a node: on success the attacker moves to `target`,
// on failure it stays put.  Probabilities live in (0, 1].
struct Exploit {
  int target = 0;
  double success_prob = 0.0;

  bool operator==(const Exploit&) const = default;
};

// Reference to an attacker action at some node.  Index convention used
// everywhere (policies, LP columns, trajectories):
//   0     -> Wait
//   1 + i -> i-th exploit of the node's exploit list
// Wait first matters: greedy value ties resolve to the lowest index, and we
// want a cornered attacker to sit still rather than lunge into a monitor.
struct ActionRef {
  bool is_wait = true;
  int exploit_index = -1;  // valid iff !is_wait

  static ActionRef wait() { return ActionRef{true, -1}; }
  static ActionRef exploit(int i) { return ActionRef{false, i}; }
  static ActionRef from_index(int idx) {
    return idx == 0 ? wait() : exploit(idx - 1);
  }
  int index() const { return is_wait ? 0 : 1 + exploit_index; }

  bool operator==(const ActionRef&) const = default;
};

// Malformed graph text (bad JSON, wrong version, unknown or missing keys).
struct GraphParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structurally invalid graph.  All violations are collected, not just the
// first one hit.
struct GraphValidationError : std::runtime_error {
  explicit GraphValidationError(std::vector<std::string> violations);
  std::vector<std::string> violations;
};

// Directed probabilistic attack graph.  Nodes are 0..node_count-1; each node
// owns an ordered exploit list.  `ids_candidates` is the pool the defender
// may place monitors on.  Construction validates; instances are immutable.
class AttackGraph {
 public:
  AttackGraph(int node_count, std::vector<std::vector<Exploit>> exploits,
              int initial, int target, std::vector<int> ids_candidates);

  int node_count() const { return node_count_; }
  int initial_node() const { return initial_; }
  int target_node() const { return target_; }
  const std::vector<int>& ids_candidates() const { return ids_candidates_; }
  const std::vector<Exploit>& exploits_at(int node) const {
    return exploits_[node];
  }
  const std::vector<std::vector<Exploit>>& exploits() const {
    return exploits_;
  }
  // Number of attacker actions at `node` (Wait plus its exploits).
  int action_count(int node) const {
    return 1 + static_cast<int>(exploits_[node].size());
  }

  // Same graph with a different current/initial node (used when re-planning
  // from mid-episode states).
  AttackGraph with_initial(int node) const;

  bool operator==(const AttackGraph&) const = default;

 private:
  int node_count_;
  std::vector<std::vector<Exploit>> exploits_;
  int initial_;
  int target_;
  std::vector<int> ids_candidates_;
};

// JSON text <-> graph.  The format is versioned and closed: unknown keys are
// rejected.  serialize_graph(parse_graph(text)) is byte-stable and
// parse_graph(serialize_graph(g)) == g exactly (probabilities round-trip via
// shortest-representation printing).  See docs/file-formats.md.
AttackGraph parse_graph(const std::string& text);
std::string serialize_graph(const AttackGraph& g);

// File convenience wrappers around parse/serialize.
AttackGraph load_graph_file(const std::string& path);
void save_graph_file(const AttackGraph& g, const std::string& path);

// Random layered DAG with bounded out-degree and a single success
// probability on every exploit.  Deterministic in `seed`; retries internally
// until the target is reachable from the initial node and throws
// std::runtime_error if that never happens within the retry budget.
AttackGraph generate_synthetic(int node_count, int out_degree,
                               double success_prob, int ids_pool_size,
                               std::uint64_t seed);

// Minimum number of exploit hops from -> to, ignoring probabilities.
// nullopt when unreachable; 0 when from == to.
std::optional<int> hop_distance(const AttackGraph& g, int from, int to);

}  // namespace mtdsim
