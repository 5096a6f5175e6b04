#include <doctest.h>

#include <set>

#include "signbal/errors.hpp"
#include "signbal/rng.hpp"
#include "signbal/timbal.hpp"
#include "support.hpp"

using namespace signbal;
using namespace signbal::testing;

namespace {

TimbalConfig quiet(std::uint64_t seed = 0) {
  TimbalConfig c;
  c.seed = seed;
  return c;
}

std::set<Vertex> as_set(std::span<const Vertex> v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("config validation and batch sizes") {
  TimbalConfig c;
  CHECK(c.batch_for(300, 300) == 1);
  CHECK(c.batch_for(301, 50) == 100);
  c.batch_k = 7;
  CHECK(c.batch_for(5000, 10) == 7);
  c.dynamic_batch = true;
  CHECK(c.batch_for(5000, 4321) == 43);
  CHECK(c.batch_for(5000, 99) == 1);
  c.batch_k = 0;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c.batch_k.reset();
  c.eig_tol = 0;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c.eig_tol = 1e-6;
  c.subsample = SubsampleConfig{0, 200, 0.5, 8};
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c.subsample = SubsampleConfig{1, 1, 0.5, 8};
  CHECK_THROWS_AS(c.validate(), ArgumentError);
}

TEST_CASE("first_stage examples") {
  SUBCASE("balanced input needs no iteration") {
    const auto g = random_balanced(30, 0.2, 1);
    const auto r = first_stage(g, quiet());
    CHECK(r.trace.records.empty());
    CHECK(r.graph == g);
  }
  SUBCASE("negative triangle loses one vertex") {
    const auto r = first_stage(neg_triangle(), quiet());
    REQUIRE(r.trace.records.size() == 1);
    CHECK(r.trace.records[0].removed.size() == 1);
    CHECK(r.graph.num_vertices() == 2);
    CHECK(r.graph.num_edges() == 1);
    CHECK(r.graph.num_negative_edges() == 1);
  }
  SUBCASE("K4 example removes one of the two all-negative vertices") {
    const auto r = first_stage(figure2_left(), quiet());
    REQUIRE(r.trace.removal_order.size() == 1);
    CHECK(r.trace.removal_order[0] <= 1);
    CHECK(r.graph.num_vertices() == 3);
    CHECK(is_balanced(r.graph));
  }
  SUBCASE("disconnected input is rejected") {
    CHECK_THROWS_AS(first_stage(make_graph(4, {{0, 1, 1}, {2, 3, 1}}), quiet()), ArgumentError);
  }
}

TEST_CASE("first_stage trace invariants") {
  for (std::uint64_t s = 0; s < 15; ++s) {
    auto g = random_graph(60 + 20 * (s % 4), 0.08, 0.4, s + 70);
    const auto comps = connected_components(g);
    g = induced_subgraph(g, comps.members(comps.largest));
    TimbalConfig cfg = quiet(s);
    cfg.batch_k = 1 + s % 5;
    const auto r = first_stage(g, cfg);
    CHECK(is_balanced(r.graph));
    std::size_t prev = g.num_vertices() + 1;
    for (const auto& rec : r.trace.records) {
      CHECK(rec.n < prev);
      prev = rec.n;
      CHECK(rec.removed.size() <= *cfg.batch_k);
      CHECK(rec.edge_agreement >= -1.0);
      CHECK(rec.edge_agreement <= 1.0);
      CHECK(rec.lambda1 >= -1e-9);
    }
    const auto removed = as_set(r.trace.removal_order);
    CHECK(removed.size() == r.trace.removal_order.size());
    const auto kept = as_set(r.vertices);
    for (Vertex v : kept) CHECK(removed.count(v) == 0);
    CHECK(removed.size() + kept.size() == g.num_vertices());
    std::size_t counted = 0;
    for (const auto& rec : r.trace.records) counted += rec.removed.size() + rec.discarded;
    CHECK(counted == removed.size());
    CHECK(induced_subgraph(g, r.vertices) == r.graph);
  }
}

TEST_CASE("second_stage") {
  SUBCASE("conflicting vertex of the K4 example stays out") {
    const auto full = figure2_left();
    const auto r = second_stage_from(full, std::vector<Vertex>{1, 2, 3}, std::vector<Vertex>{0});
    CHECK(r.restored.empty());
    CHECK(r.vertices == std::vector<Vertex>{1, 2, 3});
  }
  SUBCASE("balanced full graph restores everything") {
    const auto full = random_balanced(25, 0.2, 3);
    std::vector<Vertex> kept, removed;
    for (Vertex v = 0; v < 25; ++v) (v % 4 == 0 ? removed : kept).push_back(v);
    const auto base = induced_subgraph(full, kept);
    if (connected_components(base).count() == 1) {
      const auto r = second_stage(base, full, removed);
      CHECK(r.vertices.size() == 25);
      CHECK(witnesses(r.graph, r.partition));
    }
  }
  SUBCASE("vertex without edges into the subgraph is skipped") {
    const auto full = make_graph(3, {{0, 1, 1}, {1, 2, 1}});
    const auto r = second_stage_from(full, std::vector<Vertex>{0}, std::vector<Vertex>{2, 1});
    CHECK(r.restored == std::vector<Vertex>{1});
    const auto again = second_stage_from(full, std::vector<Vertex>{0}, std::vector<Vertex>{1, 2});
    CHECK(again.restored == std::vector<Vertex>{1, 2});
  }
  SUBCASE("by label against an independently parsed graph") {
    const std::vector<SignedEdge> e{{0, 1, -1}, {0, 2, -1}, {1, 2, -1}};
    const auto full = SignedGraph::from_edges(3, e, {"x", "y", "z"});
    const auto other = SignedGraph::from_edges(2, std::vector<SignedEdge>{{0, 1, -1}}, {"z", "y"});
    const auto r = second_stage(other, full, std::vector<Vertex>{0});
    CHECK(r.vertices == std::vector<Vertex>{1, 2});
  }
  SUBCASE("rejects non-subgraphs and unbalanced starts") {
    const auto full = neg_triangle();
    CHECK_THROWS_AS(second_stage_from(full, std::vector<Vertex>{0, 1, 2}, std::vector<Vertex>{}),
                    ArgumentError);
    const auto wrong = make_graph(2, {{0, 1, 1}});
    CHECK_THROWS_AS(second_stage(wrong, full, std::vector<Vertex>{2}), ArgumentError);
  }
}

TEST_CASE("run_timbal examples") {
  SUBCASE("balanced input is returned whole") {
    const auto g = random_balanced(40, 0.1, 8);
    const auto r = run_timbal(g, quiet());
    CHECK(r.vertices.size() == 40);
    CHECK(r.trace.records.empty());
    CHECK(r.subgraph == g);
  }
  SUBCASE("negative triangle") {
    const auto r = run_timbal(neg_triangle(), quiet());
    CHECK(r.subgraph.num_vertices() == 2);
    CHECK(r.restored.empty());
  }
  SUBCASE("empty graph") {
    const auto r = run_timbal(make_graph(0, {}), quiet());
    CHECK(r.vertices.empty());
  }
  SUBCASE("disconnected input keeps the largest component") {
    const auto g = make_graph(6, {{0, 1, -1}, {0, 2, -1}, {1, 2, -1}, {0, 3, 1}, {4, 5, 1}});
    const auto r = run_timbal(g, quiet());
    CHECK(r.initial_discarded == std::vector<Vertex>{4, 5});
    CHECK(r.subgraph.num_vertices() >= 2);
    for (Vertex v : r.vertices) CHECK(v < 4);
    CHECK(is_balanced(r.subgraph));
  }
}

TEST_CASE("run_timbal output is balanced and accounted for") {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const std::size_t n = 5 + (s * 13) % 120;
    const auto g = random_graph(n, 0.05 + 0.05 * static_cast<double>(s % 6), 0.2 + 0.1 * static_cast<double>(s % 4), s);
    TimbalConfig cfg = quiet(s);
    if (s % 3 == 0) cfg.batch_k = 4;
    if (s % 5 == 0) cfg.dynamic_batch = true;
    cfg.trace_metrics = s % 2 == 0;
    const auto r = run_timbal(g, cfg);
    REQUIRE(std::holds_alternative<Partition>(check_balance(r.subgraph)));
    CHECK(witnesses(r.subgraph, r.partition));
    CHECK(r.subgraph == induced_subgraph(g, r.vertices));
    const auto final_set = as_set(r.vertices);
    for (Vertex v : r.stage1_vertices) CHECK(final_set.count(v) == 1);
    CHECK(r.vertices.size() == r.stage1_vertices.size() + r.restored.size());

    std::multiset<Vertex> all;
    all.insert(r.initial_discarded.begin(), r.initial_discarded.end());
    all.insert(r.trace.removal_order.begin(), r.trace.removal_order.end());
    all.insert(r.stage1_vertices.begin(), r.stage1_vertices.end());
    CHECK(all.size() == n);
    CHECK(std::set<Vertex>(all.begin(), all.end()).size() == n);
  }
}

TEST_CASE("run_timbal is deterministic") {
  const auto g = random_graph(200, 0.04, 0.4, 5);
  TimbalConfig cfg = quiet(9);
  cfg.subsample = SubsampleConfig{20, 40, 0.5, 8};
  const auto a = run_timbal(g, cfg);
  const auto b = run_timbal(g, cfg);
  CHECK(a.vertices == b.vertices);
  CHECK(a.partition.side == b.partition.side);
  CHECK(a.trace.removal_order == b.trace.removal_order);
  CHECK(a.subsample_removed == b.subsample_removed);
}

TEST_CASE("rbfs_sample") {
  SUBCASE("full fraction and unlimited depth is a BFS of the component") {
    const auto g = make_graph(7, {{0, 1, 1}, {1, 2, -1}, {2, 3, 1}, {3, 4, 1}, {5, 6, 1}});
    const auto s = rbfs_sample(g, 2, 1.0, std::numeric_limits<std::size_t>::max(), 1);
    CHECK(as_set(s) == std::set<Vertex>{0, 1, 2, 3, 4});
    CHECK(s[0] == 2);
  }
  SUBCASE("depth one is the closed neighborhood") {
    const auto g = random_graph(40, 0.2, 0.5, 2);
    const auto s = rbfs_sample(g, 5, 0.3, 1, 7);
    std::set<Vertex> expected{5};
    for (const auto& nb : g.neighbors(5)) expected.insert(nb.vertex);
    CHECK(as_set(s) == expected);
  }
  SUBCASE("star from its center") {
    std::vector<SignedEdge> e;
    for (Vertex leaf = 1; leaf < 12; ++leaf) e.push_back({0, leaf, -1});
    const auto star = SignedGraph::from_edges(12, e);
    CHECK(rbfs_sample(star, 0, 0.1, 1, 3).size() == 12);
  }
  SUBCASE("target size caps the sample") {
    const auto g = random_graph(200, 0.1, 0.5, 4);
    const auto s = rbfs_sample(g, 0, 0.5, 8, 3, 25);
    CHECK(s.size() == 25);
    CHECK(as_set(s).size() == 25);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(rbfs_sample(neg_triangle(), 3, 0.5, 2, 0), ArgumentError);
    CHECK_THROWS_AS(rbfs_sample(neg_triangle(), 0, 0.0, 2, 0), ArgumentError);
  }
}

TEST_CASE("subsample") {
  SUBCASE("balanced graphs yield nothing") {
    const auto g = random_balanced_sparse(800, 800, 6);
    CHECK(subsample(g, SubsampleConfig{30, 60, 0.5, 8}, quiet(), 1).empty());
  }
  SUBCASE("one sample covering the graph equals the first-stage removals") {
    auto g = random_graph(40, 0.15, 0.5, 12);
    const auto comps = connected_components(g);
    g = induced_subgraph(g, comps.members(comps.largest));
    const auto removed = subsample(g, SubsampleConfig{1, 1000, 1.0, 1000}, quiet(), 0);
    TimbalConfig direct = quiet(mix_seed(mix_seed(0, 0), 2));
    direct.trace_metrics = false;
    const auto fs = first_stage(g, direct);
    CHECK(removed == fs.trace.removal_order);
    CHECK(is_balanced(remove_vertices(g, removed)));
  }
  SUBCASE("removals are unique and valid") {
    const auto g = random_graph(300, 0.02, 0.5, 13);
    std::size_t failures = 99;
    const auto removed = subsample(g, SubsampleConfig{25, 50, 0.5, 8}, quiet(), 4, &failures);
    CHECK(failures == 0);
    CHECK(as_set(removed).size() == removed.size());
    for (Vertex v : removed) CHECK(v < 300);
  }
}
