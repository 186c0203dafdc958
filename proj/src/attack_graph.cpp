#include "mtdsim/attack_graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

#include "mtdsim/file_io.hpp"
#include "mtdsim/rng.hpp"
#include "nlohmann/json.hpp"

namespace mtdsim {

namespace {

std::string join_violations(const std::vector<std::string>& v) {
  std::string msg = "invalid graph: ";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) msg += "; ";
    msg += v[i];
  }
  return msg;
}

}  // namespace

GraphValidationError::GraphValidationError(std::vector<std::string> v)
    : std::runtime_error(join_violations(v)), violations(std::move(v)) {}

AttackGraph::AttackGraph(int node_count,
                         std::vector<std::vector<Exploit>> exploits,
                         int initial, int target,
                         std::vector<int> ids_candidates)
    : node_count_(node_count),
      exploits_(std::move(exploits)),
      initial_(initial),
      target_(target),
      ids_candidates_(std::move(ids_candidates)) {
  std::vector<std::string> bad;
  if (node_count_ <= 0) {
    bad.push_back("node_count must be positive");
    throw GraphValidationError(std::move(bad));
  }
  auto in_range = [&](int s) { return s >= 0 && s < node_count_; };
  if (static_cast<int>(exploits_.size()) != node_count_)
    bad.push_back("exploit table size does not match node_count");
  if (!in_range(initial_)) bad.push_back("initial node out of range");
  if (!in_range(target_)) bad.push_back("target node out of range");
  std::set<int> seen_cand;
  for (int c : ids_candidates_) {
    if (!in_range(c)) bad.push_back("ids candidate out of range");
    if (!seen_cand.insert(c).second)
      bad.push_back("duplicate ids candidate (" + std::to_string(c) + ")");
  }
  for (int s = 0; s < static_cast<int>(exploits_.size()) && s < node_count_;
       ++s) {
    std::set<int> seen_dst;
    for (const Exploit& e : exploits_[s]) {
      std::string edge =
          "(" + std::to_string(s) + "->" + std::to_string(e.target) + ")";
      if (!in_range(e.target)) {
        bad.push_back("exploit target out of range " + edge);
        continue;
      }
      if (e.target == s) bad.push_back("self-edge forbidden " + edge);
      if (!(e.success_prob > 0.0 && e.success_prob <= 1.0))
        bad.push_back("probability out of range " + edge);
      if (!seen_dst.insert(e.target).second)
        bad.push_back("duplicate edge " + edge);
    }
  }
  if (!bad.empty()) throw GraphValidationError(std::move(bad));
}

AttackGraph AttackGraph::with_initial(int node) const {
  return AttackGraph(node_count_, exploits_, node, target_, ids_candidates_);
}

namespace {

using json = nlohmann::json;

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::set<std::string>& required,
                  const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key()))
      throw GraphParseError("unknown key '" + it.key() + "' in " + where);
  }
  for (const std::string& k : required) {
    if (!obj.contains(k))
      throw GraphParseError("missing key '" + k + "' in " + where);
  }
}

int get_int(const json& obj, const std::string& key) {
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    throw GraphParseError("key '" + key + "' must be an integer");
  return v.get<int>();
}

}  // namespace

AttackGraph parse_graph(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw GraphParseError(std::string("bad JSON: ") + e.what());
  }
  if (!j.is_object()) throw GraphParseError("top level must be an object");
  require_keys(j,
               {"version", "node_count", "initial", "target", "ids_candidates",
                "exploits"},
               {"version", "node_count", "initial", "target", "ids_candidates",
                "exploits"},
               "graph");
  if (get_int(j, "version") != 1)
    throw GraphParseError("unsupported version (expected 1)");
  int node_count = get_int(j, "node_count");
  int initial = get_int(j, "initial");
  int target = get_int(j, "target");
  if (!j.at("ids_candidates").is_array())
    throw GraphParseError("key 'ids_candidates' must be an array");
  std::vector<int> candidates;
  for (const json& c : j.at("ids_candidates")) {
    if (!c.is_number_integer())
      throw GraphParseError("ids_candidates entries must be integers");
    candidates.push_back(c.get<int>());
  }
  if (!j.at("exploits").is_array())
    throw GraphParseError("key 'exploits' must be an array");
  if (node_count <= 0)
    throw GraphValidationError({"node_count must be positive"});
  std::vector<std::vector<Exploit>> table(node_count);
  std::vector<std::string> bad;
  for (const json& e : j.at("exploits")) {
    if (!e.is_object())
      throw GraphParseError("exploits entries must be objects");
    require_keys(e, {"src", "dst", "p"}, {"src", "dst", "p"}, "exploit");
    int src = get_int(e, "src");
    int dst = get_int(e, "dst");
    if (!e.at("p").is_number())
      throw GraphParseError("key 'p' must be a number");
    double p = e.at("p").get<double>();
    if (src < 0 || src >= node_count) {
      bad.push_back("exploit source out of range (" + std::to_string(src) +
                    "->" + std::to_string(dst) + ")");
      continue;
    }
    table[src].push_back(Exploit{dst, p});
  }
  if (!bad.empty()) throw GraphValidationError(std::move(bad));
  return AttackGraph(node_count, std::move(table), initial, target,
                     std::move(candidates));
}

std::string serialize_graph(const AttackGraph& g) {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["node_count"] = g.node_count();
  j["initial"] = g.initial_node();
  j["target"] = g.target_node();
  j["ids_candidates"] = g.ids_candidates();
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (int s = 0; s < g.node_count(); ++s) {
    for (const Exploit& e : g.exploits_at(s)) {
      nlohmann::ordered_json edge;
      edge["src"] = s;
      edge["dst"] = e.target;
      edge["p"] = e.success_prob;
      edges.push_back(std::move(edge));
    }
  }
  j["exploits"] = std::move(edges);
  return j.dump(2) + "\n";
}

AttackGraph load_graph_file(const std::string& path) {
  return parse_graph(read_file(path));
}

void save_graph_file(const AttackGraph& g, const std::string& path) {
  write_file_atomic(path, serialize_graph(g));
}

namespace {

// First k entries of a partial Fisher-Yates pass over `items`; exactly k
// draws from `rng` regardless of how the swaps fall.
std::vector<int> sample_prefix(std::vector<int> items, int k, Rng& rng) {
  const int m = static_cast<int>(items.size());
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(rng.next_below(m - i));
    std::swap(items[i], items[j]);
  }
  items.resize(k);
  return items;
}

bool reachable(const std::vector<std::vector<Exploit>>& table, int from,
               int to) {
  std::vector<char> seen(table.size(), 0);
  std::deque<int> q{from};
  seen[from] = 1;
  while (!q.empty()) {
    int s = q.front();
    q.pop_front();
    if (s == to) return true;
    for (const Exploit& e : table[s]) {
      if (!seen[e.target]) {
        seen[e.target] = 1;
        q.push_back(e.target);
      }
    }
  }
  return false;
}

}  // namespace

AttackGraph generate_synthetic(int node_count, int out_degree,
                               double success_prob, int ids_pool_size,
                               std::uint64_t seed) {
  if (node_count < 2)
    throw std::invalid_argument("generate_synthetic: need at least 2 nodes");
  if (out_degree < 1)
    throw std::invalid_argument("generate_synthetic: out_degree must be >= 1");
  if (!(success_prob > 0.0 && success_prob <= 1.0))
    throw std::invalid_argument(
        "generate_synthetic: success_prob must be in (0, 1]");
  if (ids_pool_size < 1 || ids_pool_size > node_count)
    throw std::invalid_argument("generate_synthetic: bad ids_pool_size");

  Rng rng(seed);
  const int n = node_count;
  // Exploits only point a bounded number of ranks ahead in a random
  // topological order.  The window keeps generated graphs layered, so larger
  // instances actually contain long attack paths instead of collapsing to
  // two or three hops.
  const int window = out_degree + 2;
  const int max_attempts = 1000;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i >= 1; --i) {
      int j = static_cast<int>(rng.next_below(i + 1));
      std::swap(perm[i], perm[j]);
    }
    std::vector<std::vector<Exploit>> table(n);
    for (int rank = 0; rank < n; ++rank) {
      int hi = std::min(rank + window, n - 1);
      std::vector<int> pool(perm.begin() + rank + 1, perm.begin() + hi + 1);
      int d = std::min<int>(out_degree, pool.size());
      if (d == 0) continue;
      for (int t : sample_prefix(std::move(pool), d, rng))
        table[perm[rank]].push_back(Exploit{t, success_prob});
    }
    int initial = static_cast<int>(rng.next_below(n));
    int t = static_cast<int>(rng.next_below(n - 1));
    int target = t + (t >= initial ? 1 : 0);
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::vector<int> pool = sample_prefix(std::move(all), ids_pool_size, rng);
    std::sort(pool.begin(), pool.end());
    if (!reachable(table, initial, target)) continue;
    return AttackGraph(n, std::move(table), initial, target, std::move(pool));
  }
  throw std::runtime_error(
      "generate_synthetic: no reachable target within retry budget");
}

std::optional<int> hop_distance(const AttackGraph& g, int from, int to) {
  if (from < 0 || from >= g.node_count() || to < 0 || to >= g.node_count())
    throw std::invalid_argument("hop_distance: node out of range");
  std::vector<int> dist(g.node_count(), -1);
  std::deque<int> q{from};
  dist[from] = 0;
  while (!q.empty()) {
    int s = q.front();
    q.pop_front();
    if (s == to) return dist[s];
    for (const Exploit& e : g.exploits_at(s)) {
      if (dist[e.target] < 0) {
        dist[e.target] = dist[s] + 1;
        q.push_back(e.target);
      }
    }
  }
  return std::nullopt;
}

}  // namespace mtdsim
