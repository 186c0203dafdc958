#include "mtdsim/attack_graph.hpp"

#include <string>

#include "doctest.h"
#include "oracles.hpp"

using namespace mtdsim;

namespace {

AttackGraph chain3() {
  // 0 -> 1 -> 2, p = 0.9 each.
  return AttackGraph(3, {{{1, 0.9}}, {{2, 0.9}}, {}}, 0, 2, {1, 2});
}

bool mentions(const GraphValidationError& e, const std::string& text) {
  for (const std::string& v : e.violations)
    if (v.find(text) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("basic accessors and action indexing") {
  AttackGraph g = chain3();
  CHECK(g.node_count() == 3);
  CHECK(g.initial_node() == 0);
  CHECK(g.target_node() == 2);
  CHECK(g.action_count(0) == 2);  // Wait + one exploit
  CHECK(g.action_count(2) == 1);  // Wait only
  CHECK(ActionRef::wait().index() == 0);
  CHECK(ActionRef::exploit(0).index() == 1);
  CHECK(ActionRef::from_index(2) == ActionRef::exploit(1));
}

TEST_CASE("initial may equal target") {
  AttackGraph g(2, {{{1, 0.5}}, {}}, 1, 1, {});
  CHECK(g.initial_node() == g.target_node());
}

TEST_CASE("with_initial keeps everything else") {
  AttackGraph g = chain3().with_initial(1);
  CHECK(g.initial_node() == 1);
  CHECK(g.target_node() == 2);
  CHECK(g.exploits_at(0).size() == 1);
}

TEST_CASE("validation rejects out-of-range probability") {
  try {
    AttackGraph(2, {{{1, 1.3}}, {}}, 0, 1, {});
    FAIL("expected GraphValidationError");
  } catch (const GraphValidationError& e) {
    CHECK(mentions(e, "probability out of range"));
  }
  CHECK_THROWS_AS(AttackGraph(2, {{{1, 0.0}}, {}}, 0, 1, {}),
                  GraphValidationError);
}

TEST_CASE("validation rejects self-edges") {
  try {
    AttackGraph(2, {{{0, 0.5}}, {}}, 0, 1, {});
    FAIL("expected GraphValidationError");
  } catch (const GraphValidationError& e) {
    CHECK(mentions(e, "self-edge forbidden"));
  }
}

TEST_CASE("validation rejects duplicate edges and bad ids") {
  try {
    AttackGraph(2, {{{1, 0.5}, {1, 0.7}}, {}}, 0, 5, {0, 0});
    FAIL("expected GraphValidationError");
  } catch (const GraphValidationError& e) {
    CHECK(mentions(e, "duplicate edge"));
    CHECK(mentions(e, "target node out of range"));
    CHECK(mentions(e, "duplicate ids candidate"));
  }
}

TEST_CASE("validation rejects dangling exploit target") {
  try {
    AttackGraph(2, {{{7, 0.5}}, {}}, 0, 1, {});
    FAIL("expected GraphValidationError");
  } catch (const GraphValidationError& e) {
    CHECK(mentions(e, "exploit target out of range"));
  }
}

TEST_CASE("serialize/parse round-trips exactly") {
  AttackGraph g(4, {{{1, 0.9}, {2, 1.0 / 3.0}}, {{3, 1.0}}, {{3, 0.25}}, {}},
                0, 3, {1, 2, 3});
  std::string text = serialize_graph(g);
  AttackGraph back = parse_graph(text);
  CHECK(back == g);
  CHECK(serialize_graph(back) == text);  // byte-stable
}

TEST_CASE("parser rejects unknown and missing keys") {
  AttackGraph g = chain3();
  std::string text = serialize_graph(g);
  std::string extra = text;
  extra.insert(extra.find("\"version\""), "\"surprise\": 1, ");
  CHECK_THROWS_AS(parse_graph(extra), GraphParseError);

  CHECK_THROWS_AS(parse_graph(R"({"version": 1})"), GraphParseError);
  CHECK_THROWS_AS(parse_graph("not json at all"), GraphParseError);
  CHECK_THROWS_AS(parse_graph("[1,2,3]"), GraphParseError);
}

TEST_CASE("parser rejects wrong version and wrong types") {
  CHECK_THROWS_AS(
      parse_graph(
          R"({"version": 2, "node_count": 1, "initial": 0, "target": 0,
              "ids_candidates": [], "exploits": []})"),
      GraphParseError);
  CHECK_THROWS_AS(
      parse_graph(
          R"({"version": 1, "node_count": "two", "initial": 0, "target": 0,
              "ids_candidates": [], "exploits": []})"),
      GraphParseError);
  CHECK_THROWS_AS(
      parse_graph(
          R"({"version": 1, "node_count": 2, "initial": 0, "target": 1,
              "ids_candidates": [], "exploits": [{"src": 0, "dst": 1}]})"),
      GraphParseError);
  // Unknown key inside an exploit entry.
  CHECK_THROWS_AS(
      parse_graph(
          R"({"version": 1, "node_count": 2, "initial": 0, "target": 1,
              "ids_candidates": [],
              "exploits": [{"src": 0, "dst": 1, "p": 0.5, "note": "x"}]})"),
      GraphParseError);
}

TEST_CASE("parsed graphs still run structural validation") {
  CHECK_THROWS_AS(
      parse_graph(
          R"({"version": 1, "node_count": 2, "initial": 0, "target": 1,
              "ids_candidates": [], "exploits": [{"src": 0, "dst": 0, "p": 0.5}]})"),
      GraphValidationError);
  CHECK_THROWS_AS(
      parse_graph(
          R"({"version": 1, "node_count": 2, "initial": 0, "target": 1,
              "ids_candidates": [], "exploits": [{"src": 9, "dst": 1, "p": 0.5}]})"),
      GraphValidationError);
}

TEST_CASE("generate_synthetic smallest case has exactly one exploit") {
  AttackGraph g = generate_synthetic(2, 1, 0.9, 1, 7);
  int total = 0;
  for (int s = 0; s < g.node_count(); ++s)
    total += static_cast<int>(g.exploits_at(s).size());
  CHECK(total == 1);
  CHECK(g.node_count() == 2);
  CHECK(g.initial_node() != g.target_node());
  CHECK(g.ids_candidates().size() == 1);
  for (int s = 0; s < 2; ++s)
    for (const Exploit& e : g.exploits_at(s))
      CHECK(e.success_prob == doctest::Approx(0.9));
  CHECK(hop_distance(g, g.initial_node(), g.target_node()).has_value());
}

TEST_CASE("generate_synthetic is deterministic in the seed") {
  AttackGraph a = generate_synthetic(12, 3, 0.8, 5, 123);
  AttackGraph b = generate_synthetic(12, 3, 0.8, 5, 123);
  CHECK(a == b);
  CHECK(serialize_graph(a) == serialize_graph(b));
}

TEST_CASE("generate_synthetic respects its contract at size 20") {
  AttackGraph g = generate_synthetic(20, 3, 0.9, 10, 42);
  CHECK(g.node_count() == 20);
  CHECK(g.ids_candidates().size() == 10);
  for (int s = 0; s < 20; ++s) CHECK(g.exploits_at(s).size() <= 3);
  auto d = hop_distance(g, g.initial_node(), g.target_node());
  REQUIRE(d.has_value());
  CHECK(*d >= 1);
}

TEST_CASE("generate_synthetic validates arguments") {
  CHECK_THROWS_AS(generate_synthetic(1, 1, 0.9, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_synthetic(5, 0, 0.9, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_synthetic(5, 1, 1.5, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_synthetic(5, 1, 0.9, 9, 0), std::invalid_argument);
}

TEST_CASE("hop_distance basics") {
  AttackGraph g = chain3();
  CHECK(hop_distance(g, 0, 2) == 2);
  CHECK(hop_distance(g, 0, 0) == 0);
  CHECK(hop_distance(g, 2, 0) == std::nullopt);
  CHECK_THROWS_AS(hop_distance(g, 0, 9), std::invalid_argument);
}

TEST_CASE("hop_distance agrees with Floyd-Warshall on generated graphs") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    AttackGraph g = generate_synthetic(15, 3, 0.9, 6, seed);
    auto fw = oracle::floyd_warshall_distances(g);
    for (int i = 0; i < g.node_count(); ++i)
      for (int j = 0; j < g.node_count(); ++j) {
        auto d = hop_distance(g, i, j);
        if (fw[i][j] < 0)
          CHECK(!d.has_value());
        else
          CHECK(d == fw[i][j]);
      }
  }
}
