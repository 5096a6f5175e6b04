#include "signbal/timbal.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "signbal/metrics.hpp"
#include "signbal/rng.hpp"

namespace signbal {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Splits g into its largest component and the rest (ascending).
struct Split {
  std::vector<Vertex> main;
  std::vector<Vertex> rest;
};

Split split_largest(const SignedGraph& g) {
  Split out;
  if (g.num_vertices() == 0) return out;
  const auto comps = connected_components(g);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    (comps.component[v] == comps.largest ? out.main : out.rest).push_back(v);
  }
  return out;
}

std::vector<Vertex> compose(std::span<const Vertex> outer, std::span<const Vertex> inner) {
  std::vector<Vertex> out;
  out.reserve(inner.size());
  for (Vertex v : inner) out.push_back(outer[v]);
  return out;
}

void map_trace(RemovalTrace& trace, std::span<const Vertex> to_input) {
  for (auto& rec : trace.records) rec.removed = compose(to_input, rec.removed);
  trace.removal_order = compose(to_input, trace.removal_order);
}

}  // namespace

void TimbalConfig::validate() const {
  if (batch_k && *batch_k < 1) throw ArgumentError("batch size must be at least 1");
  if (!(eig_tol > 0)) throw ArgumentError("eigensolver tolerance must be positive");
  if (eig_max_iter && *eig_max_iter < 1) throw ArgumentError("eigensolver iteration cap must be positive");
  if (!(rel_improve >= 0)) throw ArgumentError("relative improvement threshold must be non-negative");
  if (!(eta > 0 && eta < 1)) throw ArgumentError("eta must lie in (0, 1)");
  if (subsample) {
    if (subsample->samples < 1) throw ArgumentError("subsample count must be at least 1");
    if (subsample->target_size < 2) throw ArgumentError("subsample size must be at least 2");
    if (!(subsample->rbfs_frac > 0 && subsample->rbfs_frac <= 1)) {
      throw ArgumentError("rbfs fraction must lie in (0, 1]");
    }
  }
}

std::size_t TimbalConfig::batch_for(std::size_t initial_n, std::size_t current_n) const {
  if (dynamic_batch) return std::max<std::size_t>(1, current_n / 100);
  if (batch_k) return *batch_k;
  return initial_n <= kSmallGraph ? 1 : kDefaultBatch;
}

FirstStageResult first_stage(const SignedGraph& g, const TimbalConfig& cfg) {
  cfg.validate();
  if (g.num_vertices() > 0 && connected_components(g).count() != 1) {
    throw ArgumentError("first_stage: graph must be connected");
  }

  FirstStageResult out;
  SignedGraph cur = g;
  std::vector<Vertex> to_input(g.num_vertices());
  std::iota(to_input.begin(), to_input.end(), Vertex{0});
  std::optional<std::vector<double>> warm;
  const BatchOptions batch_opts{cfg.rel_improve, cfg.eta};

  for (std::size_t iter = 0; !is_balanced(cur); ++iter) {
    TraceRecord rec;
    rec.iteration = iter;
    rec.n = cur.num_vertices();
    rec.m = cur.num_edges();
    rec.avg_degree = average_degree(cur);

    EigensolverOptions eo;
    eo.tol = cfg.eig_tol;
    eo.max_iter = cfg.eig_max_iter;
    eo.seed = mix_seed(cfg.seed, 2 * iter);
    eo.initial = std::move(warm);
    EigenEstimate est;
    try {
      est = smallest_eigenpair(cur, eo);
      if (cfg.trace_metrics) {
        rec.edge_agreement = edge_agreement_for(
            cur, sign_pattern(dominant_adjacency_eigenpair(cur, mix_seed(cfg.seed, 2 * iter + 1),
                                                           cfg.eig_tol, cfg.eig_max_iter)
                                  .v));
      }
    } catch (const ConvergenceError& e) {
      throw StageConvergenceError(e, out.trace);
    }
    rec.lambda1 = est.lambda1;
    rec.eig_iterations = est.iterations;

    const auto bounds = bound_vector(cur, est, cfg.eta);
    const auto batch =
        select_batch(cur, bounds, est, cfg.batch_for(g.num_vertices(), cur.num_vertices()), batch_opts);

    std::vector<std::uint8_t> gone(cur.num_vertices(), 0);
    for (Vertex v : batch) gone[v] = 1;
    std::vector<Vertex> keep;
    keep.reserve(cur.num_vertices() - batch.size());
    for (Vertex v = 0; v < cur.num_vertices(); ++v) {
      if (!gone[v]) keep.push_back(v);
    }
    const SignedGraph trimmed = induced_subgraph(cur, keep);
    const Split split = split_largest(trimmed);

    rec.removed.assign(batch.begin(), batch.end());
    rec.discarded = split.rest.size();
    for (Vertex v : batch) out.trace.removal_order.push_back(to_input[v]);
    for (Vertex v : split.rest) out.trace.removal_order.push_back(to_input[keep[v]]);
    rec.removed = compose(to_input, rec.removed);
    out.trace.records.push_back(std::move(rec));

    const auto survivors = compose(keep, split.main);
    std::vector<double> next(survivors.size());
    for (std::size_t i = 0; i < survivors.size(); ++i) next[i] = est.v[survivors[i]];
    warm = std::move(next);
    cur = induced_subgraph(trimmed, split.main);
    to_input = compose(to_input, survivors);
  }

  out.graph = std::move(cur);
  out.vertices = std::move(to_input);
  return out;
}

SecondStageResult second_stage_from(const SignedGraph& full, std::span<const Vertex> kept,
                                    std::span<const Vertex> removal_order) {
  const std::size_t n = full.num_vertices();
  std::vector<Vertex> sorted(kept.begin(), kept.end());
  std::sort(sorted.begin(), sorted.end());
  const SignedGraph base = induced_subgraph(full, sorted);
  const auto bal = check_balance(base);
  if (!std::holds_alternative<Partition>(bal)) {
    throw ArgumentError("second_stage: starting subgraph is not balanced");
  }
  const auto& start = std::get<Partition>(bal);

  std::vector<std::int8_t> side(n, 0);
  for (std::size_t i = 0; i < sorted.size(); ++i) side[sorted[i]] = start.side[i];

  SecondStageResult out;
  for (Vertex v : removal_order) {
    if (v >= n) throw ArgumentError("second_stage: removed vertex " + std::to_string(v) + " out of range");
    if (side[v] != 0) continue;
    std::int8_t forced = 0;
    bool consistent = true;
    for (const auto& nb : full.neighbors(v)) {
      if (side[nb.vertex] == 0) continue;
      const auto s = static_cast<std::int8_t>(nb.sign * side[nb.vertex]);
      if (forced == 0) {
        forced = s;
      } else if (forced != s) {
        consistent = false;
        break;
      }
    }
    if (consistent && forced != 0) {
      side[v] = forced;
      out.restored.push_back(v);
    }
  }

  for (Vertex v = 0; v < n; ++v) {
    if (side[v] != 0) out.vertices.push_back(v);
  }
  out.graph = induced_subgraph(full, out.vertices);
  out.partition.side.reserve(out.vertices.size());
  for (Vertex v : out.vertices) out.partition.side.push_back(side[v]);
  return out;
}

SecondStageResult second_stage(const SignedGraph& balanced, const SignedGraph& full,
                               std::span<const Vertex> removal_order) {
  std::vector<Vertex> kept;
  kept.reserve(balanced.num_vertices());
  if (balanced.label_pool() == full.label_pool()) {
    std::unordered_map<std::uint32_t, Vertex> by_origin;
    for (Vertex v = 0; v < full.num_vertices(); ++v) by_origin.emplace(full.origin(v), v);
    for (Vertex v = 0; v < balanced.num_vertices(); ++v) {
      const auto it = by_origin.find(balanced.origin(v));
      if (it == by_origin.end()) throw ArgumentError("second_stage: vertex not present in full graph");
      kept.push_back(it->second);
    }
  } else {
    std::unordered_map<std::string, Vertex> by_label;
    for (Vertex v = 0; v < full.num_vertices(); ++v) by_label.emplace(full.label(v), v);
    for (Vertex v = 0; v < balanced.num_vertices(); ++v) {
      const auto it = by_label.find(balanced.label(v));
      if (it == by_label.end()) {
        throw ArgumentError("second_stage: vertex '" + balanced.label(v) + "' not present in full graph");
      }
      kept.push_back(it->second);
    }
  }

  std::vector<Vertex> sorted = kept;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ArgumentError("second_stage: balanced graph maps two vertices to one");
  }
  for (const auto& e : balanced.edges()) {
    if (full.edge_sign(kept[e.u], kept[e.v]) != e.sign) {
      throw ArgumentError("second_stage: balanced graph is not a subgraph of the full graph");
    }
  }
  if (induced_subgraph(full, sorted).num_edges() != balanced.num_edges()) {
    throw ArgumentError("second_stage: balanced graph is not an induced subgraph of the full graph");
  }
  return second_stage_from(full, kept, removal_order);
}

std::vector<Vertex> rbfs_sample(const SignedGraph& g, Vertex start, double frac, std::size_t depth,
                                std::uint64_t seed, std::size_t target_size) {
  if (start >= g.num_vertices()) throw ArgumentError("rbfs_sample: start vertex out of range");
  if (!(frac > 0 && frac <= 1)) throw ArgumentError("rbfs_sample: fraction must lie in (0, 1]");
  if (target_size < 1) throw ArgumentError("rbfs_sample: target size must be positive");

  Rng rng(seed);
  std::vector<std::uint8_t> visited(g.num_vertices(), 0);
  std::vector<Vertex> order{start};
  visited[start] = 1;
  std::vector<Vertex> frontier{start};
  std::vector<Vertex> fresh;

  for (std::size_t level = 1; level <= depth && !frontier.empty(); ++level) {
    std::vector<Vertex> next;
    for (Vertex u : frontier) {
      fresh.clear();
      for (const auto& nb : g.neighbors(u)) {
        if (!visited[nb.vertex]) fresh.push_back(nb.vertex);
      }
      shuffle(fresh, rng);
      const std::size_t take =
          level == 1 ? fresh.size()
                     : static_cast<std::size_t>(std::ceil(frac * static_cast<double>(fresh.size())));
      for (std::size_t i = 0; i < take; ++i) {
        visited[fresh[i]] = 1;
        order.push_back(fresh[i]);
        next.push_back(fresh[i]);
        if (order.size() >= target_size) return order;
      }
    }
    frontier = std::move(next);
  }
  return order;
}

std::vector<Vertex> subsample(const SignedGraph& g, const SubsampleConfig& scfg,
                              const TimbalConfig& cfg, std::uint64_t seed, std::size_t* failures) {
  TimbalConfig inner = cfg;
  inner.subsample.reset();
  inner.trace_metrics = false;
  inner.validate();
  if (scfg.samples < 1) throw ArgumentError("subsample: sample count must be at least 1");
  if (scfg.target_size < 2) throw ArgumentError("subsample: target size must be at least 2");
  if (failures) *failures = 0;

  std::vector<Vertex> out;
  if (g.num_vertices() == 0) return out;
  std::vector<std::uint8_t> seen(g.num_vertices(), 0);

  for (std::size_t s = 0; s < scfg.samples; ++s) {
    const std::uint64_t sample_seed = mix_seed(seed, s);
    Rng rng(sample_seed);
    const auto start = static_cast<Vertex>(uniform_below(rng, g.num_vertices()));
    auto verts = rbfs_sample(g, start, scfg.rbfs_frac, scfg.rbfs_depth, mix_seed(sample_seed, 1),
                             scfg.target_size);
    std::sort(verts.begin(), verts.end());
    const SignedGraph sample = induced_subgraph(g, verts);
    const Split split = split_largest(sample);
    const auto members = compose(verts, split.main);

    inner.seed = mix_seed(sample_seed, 2);
    try {
      const auto fs = first_stage(induced_subgraph(sample, split.main), inner);
      for (Vertex v : fs.trace.removal_order) {
        const Vertex orig = members[v];
        if (!seen[orig]) {
          seen[orig] = 1;
          out.push_back(orig);
        }
      }
    } catch (const Error&) {
      if (failures) ++*failures;
    }
  }
  return out;
}

TimbalResult run_timbal(const SignedGraph& g, const TimbalConfig& cfg) {
  cfg.validate();
  TimbalResult out;
  if (g.num_vertices() == 0) return out;

  const Split top = split_largest(g);
  out.initial_discarded = top.rest;
  std::vector<Vertex> to_input = top.main;
  SignedGraph work = induced_subgraph(g, to_input);

  if (cfg.subsample) {
    const auto t0 = Clock::now();
    const auto removed = subsample(work, *cfg.subsample, cfg, mix_seed(cfg.seed, 0x5eed),
                                   &out.subsample_failures);
    out.subsample_removed = compose(to_input, removed);
    const SignedGraph trimmed = remove_vertices(work, removed);
    std::vector<std::uint8_t> gone(work.num_vertices(), 0);
    for (Vertex v : removed) gone[v] = 1;
    std::vector<Vertex> keep;
    for (Vertex v = 0; v < work.num_vertices(); ++v) {
      if (!gone[v]) keep.push_back(v);
    }
    const Split split = split_largest(trimmed);
    out.subsample_discarded = compose(to_input, compose(keep, split.rest));
    to_input = compose(to_input, compose(keep, split.main));
    work = induced_subgraph(trimmed, split.main);
    out.timings.subsample_seconds = seconds_since(t0);
  }

  const auto t1 = Clock::now();
  FirstStageResult first;
  try {
    first = first_stage(work, cfg);
  } catch (const StageConvergenceError& e) {
    auto trace = e.trace();
    // Trace vertices are stage-input indices; report them as input indices.
    map_trace(trace, to_input);
    throw StageConvergenceError(e, std::move(trace));
  }
  out.timings.first_stage_seconds = seconds_since(t1);
  map_trace(first.trace, to_input);
  out.stage1_vertices = compose(to_input, first.vertices);
  out.trace = std::move(first.trace);

  const auto t2 = Clock::now();
  std::vector<Vertex> order = out.subsample_removed;
  order.insert(order.end(), out.subsample_discarded.begin(), out.subsample_discarded.end());
  order.insert(order.end(), out.trace.removal_order.begin(), out.trace.removal_order.end());
  auto second = second_stage_from(g, out.stage1_vertices, order);
  out.timings.second_stage_seconds = seconds_since(t2);

  out.subgraph = std::move(second.graph);
  out.partition = std::move(second.partition);
  out.vertices = std::move(second.vertices);
  out.restored = std::move(second.restored);
  return out;
}

}  // namespace signbal
