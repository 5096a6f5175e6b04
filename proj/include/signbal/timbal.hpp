#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "signbal/errors.hpp"
#include "signbal/graph.hpp"
#include "signbal/spectral.hpp"

namespace signbal {

struct SubsampleConfig {
  std::size_t samples = 1000;
  std::size_t target_size = 200;
  double rbfs_frac = 0.5;
  std::size_t rbfs_depth = 8;
};

struct TimbalConfig {
  // Vertices removed per iteration. Unset: 1 for graphs of at most
  // kSmallGraph vertices, kDefaultBatch otherwise.
  std::optional<std::size_t> batch_k;
  // Per-iteration batch of max(1, n_i / 100) instead of batch_k.
  bool dynamic_batch = false;
  double eig_tol = 1e-6;
  std::optional<std::size_t> eig_max_iter;
  double rel_improve = kDefaultRelImprove;
  double eta = kDefaultEta;
  std::uint64_t seed = 0;
  std::optional<SubsampleConfig> subsample;
  // Edge agreement ratio per trace row costs one extra eigensolve per
  // iteration.
  bool trace_metrics = true;

  static constexpr std::size_t kSmallGraph = 300;
  static constexpr std::size_t kDefaultBatch = 100;

  void validate() const;
  std::size_t batch_for(std::size_t initial_n, std::size_t current_n) const;
};

// One pass of the removal loop. Vertices are indices of the graph handed to
// first_stage.
struct TraceRecord {
  std::size_t iteration = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  double lambda1 = 0.0;
  std::vector<Vertex> removed;
  std::size_t discarded = 0;
  double edge_agreement = std::numeric_limits<double>::quiet_NaN();
  double avg_degree = 0.0;
  std::size_t eig_iterations = 0;
};

struct RemovalTrace {
  std::vector<TraceRecord> records;
  // Batches and then discarded small components, iteration by iteration.
  std::vector<Vertex> removal_order;
};

// Vertex set of the balanced graph found by the removal loop, as indices of
// the stage input.
struct FirstStageResult {
  SignedGraph graph;
  std::vector<Vertex> vertices;
  RemovalTrace trace;
};

// ConvergenceError raised inside the removal loop, with the trace so far.
class StageConvergenceError : public ConvergenceError {
 public:
  StageConvergenceError(const ConvergenceError& cause, RemovalTrace trace)
      : ConvergenceError(cause), trace_(std::move(trace)) {}
  const RemovalTrace& trace() const noexcept { return trace_; }

 private:
  RemovalTrace trace_;
};

// Greedy spectral trimming until the combinatorial balance check passes.
// Requires a connected graph.
FirstStageResult first_stage(const SignedGraph& g, const TimbalConfig& cfg);

struct SecondStageResult {
  SignedGraph graph;
  Partition partition;          // over graph's vertices
  std::vector<Vertex> vertices;  // indices of `full`
  std::vector<Vertex> restored;  // indices of `full`, in restoration order
};

// Reinserts removed vertices, in the given order, whenever all their edges
// into the current subgraph force the same side. `balanced` must be a
// balanced induced subgraph of `full` sharing its label pool or labels.
SecondStageResult second_stage(const SignedGraph& balanced, const SignedGraph& full,
                               std::span<const Vertex> removal_order);

// Same, with the balanced part given as vertex indices of `full`.
SecondStageResult second_stage_from(const SignedGraph& full, std::span<const Vertex> kept,
                                    std::span<const Vertex> removal_order);

struct StageTimings {
  double subsample_seconds = 0.0;
  double first_stage_seconds = 0.0;
  double second_stage_seconds = 0.0;
};

struct TimbalResult {
  SignedGraph subgraph;
  Partition partition;
  std::vector<Vertex> vertices;        // indices of the input graph
  std::vector<Vertex> stage1_vertices;  // indices of the input graph
  RemovalTrace trace;                  // vertices as input-graph indices
  std::vector<Vertex> initial_discarded;  // outside the largest component
  std::vector<Vertex> subsample_removed;  // generation order
  std::vector<Vertex> subsample_discarded;  // cut off by subsample removal
  std::size_t subsample_failures = 0;
  std::vector<Vertex> restored;
  StageTimings timings;
};

// Largest component, optional subsampling, first stage, second stage.
TimbalResult run_timbal(const SignedGraph& g, const TimbalConfig& cfg);

// Randomized BFS: start, then all its neighbors, then at each deeper level a
// ceil(frac * k) uniform sample of each frontier vertex's k unvisited
// neighbors. Stops after `depth` levels or once `target_size` vertices are
// visited. Returned in visiting order.
std::vector<Vertex> rbfs_sample(const SignedGraph& g, Vertex start, double frac, std::size_t depth,
                                std::uint64_t seed,
                                std::size_t target_size = std::numeric_limits<std::size_t>::max());

// Union of first-stage removal sets over randomly sampled subgraphs, in
// generation order (sample index, then removal order), without duplicates.
// Samples whose removal loop fails are skipped and counted in `failures`.
std::vector<Vertex> subsample(const SignedGraph& g, const SubsampleConfig& scfg,
                              const TimbalConfig& cfg, std::uint64_t seed,
                              std::size_t* failures = nullptr);

}  // namespace signbal
