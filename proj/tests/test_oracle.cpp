#include <set>

#include <catch2/catch_amalgamated.hpp>

#include "cpnet/oracle.hpp"
#include "helpers.hpp"

using namespace cpnet;
using test_helpers::load_fixture;
using test_helpers::outcome_of;

namespace {

std::set<std::pair<std::string, std::string>> strict_edge_set(const InducedGraph& g) {
  std::set<std::pair<std::string, std::string>> edges;
  for (std::uint64_t v = 0; v < g.node_count; ++v)
    for (std::uint32_t w : g.strict_out[v])
      edges.insert({format_assignment(*g.net, g.outcome_of(v)),
                    format_assignment(*g.net, g.outcome_of(w))});
  return edges;
}

}  // namespace

TEST_CASE("Dinner I induced graph, flips enumerated by hand") {
  CPNet net = load_fixture("dinner1.cpnet");
  InducedGraph g = build_induced_graph(net);
  CHECK(g.node_count == 4);
  CHECK(g.indiff_edge_count() == 0);
  std::set<std::pair<std::string, std::string>> expected = {
      {"S=S_v,W=W_w", "S=S_f,W=W_w"},
      {"S=S_v,W=W_w", "S=S_v,W=W_r"},
      {"S=S_v,W=W_r", "S=S_f,W=W_r"},
      {"S=S_f,W=W_r", "S=S_f,W=W_w"},
  };
  CHECK(strict_edge_set(g) == expected);
}

TEST_CASE("single binary variable graph") {
  CPNet net = parse_net("var X : x1 x2\ncpt X\n- : x1 > x2\n");
  InducedGraph g = build_induced_graph(net);
  CHECK(g.node_count == 2);
  CHECK(g.strict_edge_count() == 1);
}

TEST_CASE("indifference flips produce bidirectional edges") {
  CPNet net = load_fixture("example4.cpnet");
  InducedGraph g = build_induced_graph(net);
  CHECK(g.node_count == 4);
  std::set<std::pair<std::string, std::string>> expected = {
      {"A=a,B=b_bar", "A=a,B=b"},
      {"A=a_bar,B=b", "A=a_bar,B=b_bar"},
  };
  CHECK(strict_edge_set(g) == expected);
  CHECK(g.indiff_edge_count() == 4);  // two undirected pairs
}

TEST_CASE("node cap") {
  CPNet net = load_fixture("multimedia.cpnet");
  CHECK_THROWS_AS(build_induced_graph(net, 16), ScaleError);
}

TEST_CASE("oracle_satisfiable") {
  CHECK_FALSE(oracle_satisfiable(load_fixture("example4.cpnet")));
  CHECK(oracle_satisfiable(load_fixture("dinner1.cpnet")));
  CHECK(oracle_satisfiable(load_fixture("dinner2.cpnet")));
  CHECK(oracle_satisfiable(load_fixture("evening-dress.cpnet")));
  CHECK(oracle_satisfiable(load_fixture("example8.cpnet")));

  // repaired variant of the indifference net
  CPNet repaired = parse_net(
      "var A : a a_bar\n"
      "var B : b b_bar\n"
      "cpt A\n"
      "- : a = a_bar\n"
      "cpt B ( A )\n"
      "a : b > b_bar\n"
      "a_bar : b > b_bar\n");
  CHECK(oracle_satisfiable(repaired));
  CHECK(indifference_safety_lint(repaired).empty());
}

TEST_CASE("cyclic nets: satisfiability depends on the tables") {
  // B copies A's sign and A copies B's: consistent.
  CPNet copying = parse_net(
      "var A : a a_bar\n"
      "var B : b b_bar\n"
      "cpt A ( B )\n"
      "b : a > a_bar\n"
      "b_bar : a_bar > a\n"
      "cpt B ( A )\n"
      "a : b > b_bar\n"
      "a_bar : b_bar > b\n");
  CHECK_FALSE(copying.acyclic());
  CHECK(oracle_satisfiable(copying));

  // B opposes A while A copies B: the induced relation cycles.
  CPNet opposing = parse_net(
      "var A : a a_bar\n"
      "var B : b b_bar\n"
      "cpt A ( B )\n"
      "b : a > a_bar\n"
      "b_bar : a_bar > a\n"
      "cpt B ( A )\n"
      "a : b_bar > b\n"
      "a_bar : b > b_bar\n");
  CHECK_FALSE(opposing.acyclic());
  CHECK_FALSE(oracle_satisfiable(opposing));
}

TEST_CASE("oracle_dominates on Evening Dress") {
  CPNet net = load_fixture("evening-dress.cpnet");
  Outcome abc = outcome_of(net, "A=a1,B=b1,C=c1");
  Outcome nanbc = outcome_of(net, "A=a0,B=b0,C=c1");  // negated a, negated b
  CHECK(oracle_dominates(net, abc, nanbc));
  CHECK_FALSE(oracle_dominates(net, nanbc, abc));
  CHECK_FALSE(oracle_dominates(net, abc, abc));

  // a b0 c1 versus a0 b1 c0: incomparable in both directions
  Outcome x = outcome_of(net, "A=a1,B=b0,C=c1");
  Outcome y = outcome_of(net, "A=a0,B=b1,C=c0");
  CHECK_FALSE(oracle_dominates(net, x, y));
  CHECK_FALSE(oracle_dominates(net, y, x));
}

TEST_CASE("oracle_dominates refuses unsatisfiable nets") {
  CPNet net = load_fixture("example4.cpnet");
  Outcome a = outcome_of(net, "A=a,B=b");
  Outcome b = outcome_of(net, "A=a_bar,B=b");
  CHECK_THROWS_AS(oracle_dominates(net, a, b), InputError);
}

TEST_CASE("oracle_min_distance") {
  CPNet net = load_fixture("evening-dress.cpnet");
  Outcome abc = outcome_of(net, "A=a1,B=b1,C=c1");
  Outcome nanbc = outcome_of(net, "A=a0,B=b0,C=c1");
  MinDistance d = oracle_min_distance(net, abc, nanbc);
  REQUIRE(d.reachable);
  CHECK(d.flips == 2);
  MinDistance zero = oracle_min_distance(net, abc, abc);
  REQUIRE(zero.reachable);
  CHECK(zero.flips == 0);
}

TEST_CASE("four distinct flipping paths in Evening Dress") {
  CPNet net = load_fixture("evening-dress.cpnet");
  InducedGraph g = build_induced_graph(net);
  Outcome abc = outcome_of(net, "A=a1,B=b1,C=c1");
  Outcome nanbc = outcome_of(net, "A=a0,B=b0,C=c1");
  CHECK(count_induced_paths(g, nanbc, abc) == 4);
}

TEST_CASE("count_satisfying_rankings") {
  CHECK(count_satisfying_rankings(load_fixture("fig4-chain.cpnet")) == 2);
  CHECK(count_satisfying_rankings(load_fixture("dinner1.cpnet")) == 1);
  CPNet single = parse_net("var X : x1 x2\ncpt X\n- : x1 > x2\n");
  CHECK(count_satisfying_rankings(single) == 1);

  CHECK_THROWS_AS(count_satisfying_rankings(load_fixture("dinner2.cpnet"), 4),
                  ScaleError);
  CHECK_THROWS_AS(count_satisfying_rankings(load_fixture("example4.cpnet")),
                  InputError);
}

TEST_CASE("construct_satisfying_ranking on Dinner I") {
  CPNet net = load_fixture("dinner1.cpnet");
  std::vector<Outcome> ranking = construct_satisfying_ranking(net);
  REQUIRE(ranking.size() == 4);
  CHECK(format_assignment(net, ranking[0]) == "S=S_f,W=W_w");
  CHECK(format_assignment(net, ranking[1]) == "S=S_f,W=W_r");
  CHECK(format_assignment(net, ranking[2]) == "S=S_v,W=W_r");
  CHECK(format_assignment(net, ranking[3]) == "S=S_v,W=W_w");
}

TEST_CASE("constructed rankings satisfy the net") {
  for (const char* name : {"dinner1.cpnet", "dinner2.cpnet", "fig4-chain.cpnet",
                           "evening-dress.cpnet", "example8.cpnet"}) {
    CPNet net = load_fixture(name);
    std::vector<Outcome> ranking = construct_satisfying_ranking(net);
    InducedGraph g = build_induced_graph(net);
    REQUIRE(ranking.size() == g.node_count);
    std::vector<std::uint64_t> position(g.node_count);
    for (size_t i = 0; i < ranking.size(); ++i)
      position[g.index_of(ranking[i])] = i;
    // every strict edge points from a later (worse) to an earlier (better)
    // list position
    for (std::uint64_t v = 0; v < g.node_count; ++v)
      for (std::uint32_t w : g.strict_out[v]) {
        INFO(name);
        REQUIRE(position[w] < position[v]);
      }
  }
}

TEST_CASE("single variable ranking is its CPT order") {
  CPNet net = parse_net("var X : x1 x2 x3\ncpt X\n- : x2 > x3 > x1\n");
  std::vector<Outcome> ranking = construct_satisfying_ranking(net);
  REQUIRE(ranking.size() == 3);
  CHECK(ranking[0].values[0] == 1);
  CHECK(ranking[1].values[0] == 2);
  CHECK(ranking[2].values[0] == 0);
}

TEST_CASE("fig4 ranking count and membership") {
  CPNet net = load_fixture("fig4-chain.cpnet");
  std::vector<Outcome> ranking = construct_satisfying_ranking(net);
  CHECK(ranking.size() == 8);
  CHECK(count_satisfying_rankings(net) == 2);
}

TEST_CASE("strict acyclic nets induce acyclic strict graphs") {
  for (const char* name : {"dinner2.cpnet", "fig4-chain.cpnet",
                           "evening-dress.cpnet", "multimedia.cpnet"}) {
    CPNet net = load_fixture(name);
    InducedGraph g = build_induced_graph(net);
    auto comp = oracle_detail::scc_ids(g);
    std::vector<int> size(g.node_count, 0);
    for (std::uint64_t v = 0; v < g.node_count; ++v) ++size[comp[v]];
    for (std::uint64_t v = 0; v < g.node_count; ++v) {
      INFO(name);
      REQUIRE(size[comp[v]] == 1);
    }
  }
}

TEST_CASE("entailment is transitive (exhaustive at desk scale)") {
  CPNet net = load_fixture("fig4-chain.cpnet");
  InducedGraph g = build_induced_graph(net);
  REQUIRE(g.node_count <= 64);
  std::uint64_t n = g.node_count;
  std::vector<std::vector<bool>> dom(n, std::vector<bool>(n, false));
  for (std::uint64_t w = 0; w < n; ++w) {
    auto dist = oracle_detail::bfs_distances(g, w);
    for (std::uint64_t b = 0; b < n; ++b)
      if (b != w && dist[b] >= 0) dom[b][w] = true;
  }
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = 0; b < n; ++b)
      for (std::uint64_t c = 0; c < n; ++c)
        if (dom[a][b] && dom[b][c]) REQUIRE(dom[a][c]);
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = 0; b < n; ++b)
      if (a != b) REQUIRE_FALSE((dom[a][b] && dom[b][a]));
}

TEST_CASE("graph dump is deterministic and diffable") {
  CPNet net = load_fixture("dinner1.cpnet");
  InducedGraph g = build_induced_graph(net);
  std::string a = dump_induced_graph(g);
  std::string b = dump_induced_graph(g);
  CHECK(a == b);
  CHECK(a.find("S=S_v,W=W_r -> S=S_f,W=W_r [strict]") != std::string::npos);
  CHECK(a.find("[indiff]") == std::string::npos);
}
