#include "signbal/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <functional>
#include <limits>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "signbal/baselines.hpp"
#include "signbal/datagen.hpp"
#include "signbal/edge_list.hpp"
#include "signbal/errors.hpp"
#include "signbal/metrics.hpp"
#include "signbal/rng.hpp"
#include "signbal/timbal.hpp"

namespace signbal {

namespace {

using nlohmann::ordered_json;

struct Options {
  std::string input;
  std::uint64_t seed = 0;
  std::size_t runs = 1;
  std::optional<std::size_t> batch;
  bool dynamic_batch = false;
  std::optional<std::size_t> subsample;
  std::size_t sub_size = 200;
  double rbfs_frac = 0.5;
  std::size_t rbfs_depth = 8;
  double eig_tol = 1e-6;
  std::optional<std::size_t> max_iter;
  bool no_trace_metrics = false;
  std::string trace;
  std::string out;
  std::string format = "json";
  std::string method;
  // generate
  std::string model;
  std::size_t gen_n = 0;
  std::size_t gen_m = 0;
  std::size_t plant = 0;
  double flip_prob = 0.5;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "Base random seed");
  cmd->add_option("--out", o.out, "Write the report to this path instead of stdout");
  cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
}

void add_run_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--runs", o.runs, "Seeded runs; the best is reported")->check(CLI::PositiveNumber);
  cmd->add_option("--eig-tol", o.eig_tol, "Relative eigensolver residual tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", o.max_iter, "Eigensolver iteration cap")->check(CLI::PositiveNumber);
  cmd->add_option("--trace", o.trace, "CSV trace output path");
}

std::string to_output(const ordered_json& report, const std::string& format) {
  if (format == "json") return report.dump(2) + "\n";
  // Flat CSV: header of scalar keys, one row.
  std::ostringstream header, row;
  bool first = true;
  std::function<void(const ordered_json&, const std::string&)> walk = [&](const ordered_json& j,
                                                                         const std::string& prefix) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
      if (it->is_object()) {
        walk(*it, key);
        continue;
      }
      if (it->is_array()) continue;
      header << (first ? "" : ",") << key;
      row << (first ? "" : ",");
      if (it->is_string()) {
        row << it->get<std::string>();
      } else if (!it->is_null()) {
        row << it->dump();
      }
      first = false;
    }
  };
  walk(report, "");
  return header.str() + "\n" + row.str() + "\n";
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file_atomic(path, text);
  }
}

std::string vertex_list(const SignedGraph& g, std::span<const Vertex> vertices) {
  std::string s;
  for (Vertex v : vertices) s += g.label(v) + "\n";
  return s;
}

std::string fmt_double(double x) {
  if (std::isnan(x)) return "";
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

ordered_json input_json(const Options& o, const SignedGraph& g, const IngestStats& stats) {
  return {{"path", o.input},
          {"n", g.num_vertices()},
          {"m", g.num_edges()},
          {"records", stats.records},
          {"self_loops", stats.self_loops},
          {"zero_weight", stats.zero_weight},
          {"merged", stats.merged},
          {"zero_aggregates", stats.zero_aggregates}};
}

ordered_json partition_json(const SignedGraph& g, const Partition& p) {
  return {{"vertices", g.num_vertices()},
          {"edges", g.num_edges()},
          {"v1", p.v1().size()},
          {"v2", p.v2().size()}};
}

// Writes V1/V2 label lists next to the report.
ordered_json write_sides(const Options& o, const SignedGraph& full, std::span<const Vertex> vertices,
                         const Partition& p) {
  if (o.out.empty()) return nullptr;
  std::vector<Vertex> v1, v2;
  for (std::size_t i = 0; i < vertices.size(); ++i) (p.side[i] > 0 ? v1 : v2).push_back(vertices[i]);
  const std::string p1 = o.out + ".v1.txt";
  const std::string p2 = o.out + ".v2.txt";
  write_file_atomic(p1, vertex_list(full, v1));
  write_file_atomic(p2, vertex_list(full, v2));
  return {{"v1", p1}, {"v2", p2}};
}

void write_timings(const Options& o, const ordered_json& timings, std::ostream& err) {
  err << "timings: " << timings.dump() << "\n";
  if (!o.out.empty()) write_file_atomic(o.out + ".timings.json", timings.dump(2) + "\n");
}

bool better(std::size_t n, std::size_t m, std::size_t best_n, std::size_t best_m) {
  return n > best_n || (n == best_n && m > best_m);
}

int cmd_timbal(const Options& o, std::ostream& out, std::ostream& err) {
  IngestStats stats;
  const SignedGraph g = read_edge_list(o.input, &stats);

  TimbalConfig cfg;
  cfg.batch_k = o.batch;
  cfg.dynamic_batch = o.dynamic_batch;
  cfg.eig_tol = o.eig_tol;
  cfg.eig_max_iter = o.max_iter;
  cfg.trace_metrics = !o.no_trace_metrics;
  if (o.subsample) {
    cfg.subsample = SubsampleConfig{*o.subsample, o.sub_size, o.rbfs_frac, o.rbfs_depth};
  }

  std::optional<TimbalResult> best;
  std::uint64_t best_seed = o.seed;
  ordered_json runs = ordered_json::array();
  ordered_json timings = ordered_json::array();
  for (std::size_t r = 0; r < o.runs; ++r) {
    cfg.seed = o.seed + r;
    auto res = run_timbal(g, cfg);
    runs.push_back({{"seed", cfg.seed},
                    {"vertices", res.subgraph.num_vertices()},
                    {"edges", res.subgraph.num_edges()}});
    timings.push_back({{"seed", cfg.seed},
                       {"subsample_seconds", res.timings.subsample_seconds},
                       {"first_stage_seconds", res.timings.first_stage_seconds},
                       {"second_stage_seconds", res.timings.second_stage_seconds}});
    if (!best || better(res.subgraph.num_vertices(), res.subgraph.num_edges(),
                        best->subgraph.num_vertices(), best->subgraph.num_edges())) {
      best = std::move(res);
      best_seed = cfg.seed;
    }
  }

  ordered_json trace_path = nullptr;
  if (!o.trace.empty()) {
    std::ostringstream csv;
    csv << "iter,n,m,lambda1_est,removed,discarded,edge_agreement,avg_degree\n";
    for (const auto& rec : best->trace.records) {
      std::string removed;
      for (std::size_t i = 0; i < rec.removed.size(); ++i) {
        removed += (i ? ";" : "") + g.label(rec.removed[i]);
      }
      csv << rec.iteration << ',' << rec.n << ',' << rec.m << ',' << fmt_double(rec.lambda1) << ','
          << removed << ',' << rec.discarded << ',' << fmt_double(rec.edge_agreement) << ','
          << fmt_double(rec.avg_degree) << '\n';
    }
    write_file_atomic(o.trace, csv.str());
    trace_path = o.trace;
  }

  ordered_json config = {{"seed", o.seed},
                         {"runs", o.runs},
                         {"batch", o.batch ? ordered_json(*o.batch) : ordered_json(nullptr)},
                         {"dynamic_batch", o.dynamic_batch},
                         {"eig_tol", o.eig_tol},
                         {"max_iter", o.max_iter ? ordered_json(*o.max_iter) : ordered_json(nullptr)},
                         {"rel_improve", cfg.rel_improve},
                         {"eta", cfg.eta},
                         {"trace_metrics", cfg.trace_metrics}};
  if (cfg.subsample) {
    config["subsample"] = {{"samples", cfg.subsample->samples},
                           {"target_size", cfg.subsample->target_size},
                           {"rbfs_frac", cfg.subsample->rbfs_frac},
                           {"rbfs_depth", cfg.subsample->rbfs_depth}};
  } else {
    config["subsample"] = nullptr;
  }

  ordered_json result = partition_json(best->subgraph, best->partition);
  result["stage1_vertices"] = best->stage1_vertices.size();
  result["restored"] = best->restored.size();
  result["iterations"] = best->trace.records.size();
  result["removed"] = best->trace.removal_order.size();
  result["initial_discarded"] = best->initial_discarded.size();
  result["subsample_removed"] = best->subsample_removed.size();
  result["subsample_discarded"] = best->subsample_discarded.size();
  result["subsample_failures"] = best->subsample_failures;

  ordered_json report = {{"command", "timbal"},
                         {"input", input_json(o, g, stats)},
                         {"config", config},
                         {"best_seed", best_seed},
                         {"result", result},
                         {"runs", runs},
                         {"trace", trace_path},
                         {"sides", write_sides(o, g, best->vertices, best->partition)}};
  emit(to_output(report, o.format), o.out, out);
  write_timings(o, timings, err);
  return kExitOk;
}

int cmd_baseline(const Options& o, std::ostream& out, std::ostream& err) {
  IngestStats stats;
  const SignedGraph g = read_edge_list(o.input, &stats);

  // Baselines run on the largest component.
  std::vector<Vertex> main;
  if (g.num_vertices() > 0) {
    const auto comps = connected_components(g);
    main = comps.members(comps.largest);
  }
  const SignedGraph work = induced_subgraph(g, main);

  std::optional<BaselineResult> best;
  std::uint64_t best_seed = o.seed;
  ordered_json runs = ordered_json::array();
  ordered_json timings = ordered_json::array();
  for (std::size_t r = 0; r < o.runs; ++r) {
    const std::uint64_t seed = o.seed + r;
    const auto t0 = std::chrono::steady_clock::now();
    BaselineResult res;
    if (o.method == "eigen") {
      res = eigen_baseline(work, seed);
    } else if (o.method == "grasp") {
      res = grasp_construct(work, seed);
    } else {
      res = ggmz(work, seed);
    }
    timings.push_back(
        {{"seed", seed},
         {"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}});
    runs.push_back(
        {{"seed", seed}, {"vertices", res.subgraph.num_vertices()}, {"edges", res.subgraph.num_edges()}});
    if (!best || better(res.subgraph.num_vertices(), res.subgraph.num_edges(),
                        best->subgraph.num_vertices(), best->subgraph.num_edges())) {
      best = std::move(res);
      best_seed = seed;
    }
  }

  std::vector<Vertex> vertices;
  for (Vertex v : best->vertices) vertices.push_back(main[v]);

  ordered_json trace_path = nullptr;
  if (!o.trace.empty() && o.method == "eigen") {
    std::ostringstream csv;
    csv << "tau,n,m,balanced\n";
    for (const auto& p : best->sweep) {
      csv << fmt_double(p.tau) << ',' << p.n << ',' << p.m << ',' << (p.balanced ? 1 : 0) << '\n';
    }
    write_file_atomic(o.trace, csv.str());
    trace_path = o.trace;
  }

  ordered_json meta = ordered_json::object();
  for (const auto& [k, v] : best->meta) meta[k] = v;
  ordered_json report = {{"command", "baseline"},
                         {"method", o.method},
                         {"input", input_json(o, g, stats)},
                         {"config", {{"seed", o.seed}, {"runs", o.runs}}},
                         {"best_seed", best_seed},
                         {"result", partition_json(best->subgraph, best->partition)},
                         {"meta", meta},
                         {"runs", runs},
                         {"trace", trace_path},
                         {"sides", write_sides(o, g, vertices, best->partition)}};
  emit(to_output(report, o.format), o.out, out);
  write_timings(o, timings, err);
  return kExitOk;
}

int cmd_generate(const Options& o, std::ostream& out, std::ostream&) {
  if (o.model != "ba") throw ArgumentError("generate: unknown model '" + o.model + "'");
  const SignedGraph topology = barabasi_albert(o.gen_n, o.gen_m, mix_seed(o.seed, 0));
  const PlantSpec spec{o.plant, mix_seed(o.seed, 1), o.flip_prob};
  const auto planted = plant_balanced(topology, spec);

  std::ostringstream graph;
  write_edge_list(graph, planted.graph);
  ordered_json labels = ordered_json::array();
  ordered_json sides = ordered_json::array();
  for (std::size_t i = 0; i < planted.planted.size(); ++i) {
    labels.push_back(planted.graph.label(planted.planted[i]));
    sides.push_back(planted.partition.side[i]);
  }
  const ordered_json truth = {{"model", "ba"},
                              {"n", o.gen_n},
                              {"m_attach", o.gen_m},
                              {"edges", planted.graph.num_edges()},
                              {"seed", o.seed},
                              {"planted_size", o.plant},
                              {"sign_flip_prob", o.flip_prob},
                              {"planted", labels},
                              {"sides", sides}};
  if (o.out.empty()) {
    out << graph.str();
  } else {
    write_file_atomic(o.out, graph.str());
    write_file_atomic(o.out + ".truth.json", truth.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_metrics(const Options& o, std::ostream& out, std::ostream&) {
  IngestStats stats;
  const SignedGraph g = read_edge_list(o.input, &stats);
  const auto s = summarize(g, nullptr, o.seed);
  ordered_json report = {{"command", "metrics"},
                         {"input", input_json(o, g, stats)},
                         {"n", s.n},
                         {"m", s.m},
                         {"m_pos", s.m_pos},
                         {"m_neg", s.m_neg},
                         {"rho_neg", s.rho_neg},
                         {"density", s.density},
                         {"avg_degree", s.avg_degree},
                         {"edge_agreement", s.edge_agreement ? ordered_json(*s.edge_agreement)
                                                             : ordered_json(nullptr)},
                         {"frustration_edges", s.frustration_edges ? ordered_json(*s.frustration_edges)
                                                                   : ordered_json(nullptr)},
                         {"components", g.num_vertices() ? connected_components(g).count() : 0}};
  emit(to_output(report, o.format), o.out, out);
  return kExitOk;
}

int cmd_oracle(const Options& o, std::ostream& out, std::ostream&) {
  IngestStats stats;
  const SignedGraph g = read_edge_list(o.input, &stats);
  const auto r = brute_force_mbs(g);
  ordered_json witness = ordered_json::array();
  ordered_json sides = ordered_json::array();
  for (std::size_t i = 0; i < r.witness.size(); ++i) {
    witness.push_back(g.label(r.witness[i]));
    sides.push_back(r.partition.side[i]);
  }
  ordered_json report = {{"command", "oracle"},
                         {"input", input_json(o, g, stats)},
                         {"size", r.size},
                         {"witness", witness},
                         {"sides", sides}};
  emit(to_output(report, o.format), o.out, out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Large balanced subgraphs of signed graphs", "signbal"};
  app.require_subcommand(1);
  Options o;

  auto* timbal = app.add_subcommand("timbal", "Two-stage spectral trimming and restoration");
  timbal->add_option("input", o.input, "Edge-list file")->required();
  add_common(timbal, o);
  add_run_options(timbal, o);
  timbal->add_option("--batch", o.batch, "Vertices removed per iteration")->check(CLI::PositiveNumber);
  timbal->add_flag("--dynamic-batch", o.dynamic_batch, "Remove max(1, n/100) vertices per iteration");
  timbal->add_option("--subsample", o.subsample, "Number of sampled subgraphs")->check(CLI::PositiveNumber);
  timbal->add_option("--sub-size", o.sub_size, "Approximate sampled subgraph size")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
  timbal->add_option("--rbfs-frac", o.rbfs_frac, "Neighbor fraction per BFS level")
      ->check(CLI::Range(0.0, 1.0));
  timbal->add_option("--rbfs-depth", o.rbfs_depth, "Maximum BFS depth");
  timbal->add_flag("--no-trace-metrics", o.no_trace_metrics, "Skip edge agreement in the trace");

  auto* baseline = app.add_subcommand("baseline", "Comparison heuristics");
  baseline->add_option("method", o.method, "eigen, grasp or ggmz")
      ->required()
      ->check(CLI::IsMember({"eigen", "grasp", "ggmz"}));
  baseline->add_option("input", o.input, "Edge-list file")->required();
  add_common(baseline, o);
  add_run_options(baseline, o);

  auto* generate = app.add_subcommand("generate", "Synthetic graphs with a planted balanced subgraph");
  generate->add_option("model", o.model, "Generator")->required()->check(CLI::IsMember({"ba"}));
  generate->add_option("--n", o.gen_n, "Vertices")->required();
  generate->add_option("--m", o.gen_m, "Edges per new vertex")->required();
  generate->add_option("--plant", o.plant, "Planted balanced subgraph size");
  generate->add_option("--flip-prob", o.flip_prob, "Chance of a negative sign outside the planted set")
      ->check(CLI::Range(0.0, 1.0));
  generate->add_option("--seed", o.seed, "Random seed");
  generate->add_option("--out", o.out, "Output edge list; a .truth.json sidecar is written next to it");

  auto* metrics = app.add_subcommand("metrics", "Summary statistics");
  metrics->add_option("input", o.input, "Edge-list file")->required();
  add_common(metrics, o);

  auto* oracle = app.add_subcommand("oracle", "Exact maximum balanced subgraph of a small graph");
  oracle->add_option("input", o.input, "Edge-list file")->required();
  oracle->add_option("--out", o.out, "Write the report to this path instead of stdout");
  oracle->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*timbal) return cmd_timbal(o, out, err);
    if (*baseline) return cmd_baseline(o, out, err);
    if (*generate) return cmd_generate(o, out, err);
    if (*metrics) return cmd_metrics(o, out, err);
    return cmd_oracle(o, out, err);
  } catch (const GuardError& e) {
    err << "error: " << e.what() << "\n";
    return kExitGuard;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitAlgorithm;
  }
}

}  // namespace signbal
