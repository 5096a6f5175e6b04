#include "signbal/edge_list.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "signbal/errors.hpp"

namespace signbal {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == ',' || c == '\r'; };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_sep(line[i])) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (std::uint64_t{a} << 32) | b;
}

}  // namespace

std::vector<EdgeRecord> parse_edge_list(std::istream& in) {
  std::vector<EdgeRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#' || line[first] == '%') continue;
    const auto fields = split_fields(line);
    if (fields.size() < 3 || fields.size() > 4) {
      throw ParseError(line_no, "expected `u v w`, got " + std::to_string(fields.size()) +
                                    " field(s)");
    }
    double w = 0.0;
    const auto wf = fields[2];
    // from_chars rejects a leading '+', which some exports use for signs.
    const bool plus = wf.size() > 1 && wf[0] == '+' && wf[1] != '-';
    const auto res = std::from_chars(wf.data() + (plus ? 1 : 0), wf.data() + wf.size(), w);
    if (res.ec != std::errc{} || res.ptr != wf.data() + wf.size() || !std::isfinite(w)) {
      throw ParseError(line_no, "non-numeric weight `" + std::string(wf) + "`");
    }
    records.push_back({std::string(fields[0]), std::string(fields[1]), w});
  }
  return records;
}

SignedGraph from_edge_list(const std::vector<EdgeRecord>& records, IngestStats* stats) {
  IngestStats local;
  local.records = records.size();

  std::unordered_map<std::string, std::uint32_t> index_of;
  std::vector<std::string> labels;
  auto intern = [&](const std::string& label) {
    auto [it, inserted] = index_of.try_emplace(label, static_cast<std::uint32_t>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  // Aggregated weight per unordered pair, kept in first-appearance order so
  // that the edge order (and therefore adjacency order) is reproducible.
  std::unordered_map<std::uint64_t, std::size_t> slot_of;
  std::vector<std::pair<std::uint64_t, double>> sums;
  for (const auto& r : records) {
    if (r.u == r.v) {
      ++local.self_loops;
      continue;
    }
    if (r.weight == 0.0) {
      ++local.zero_weight;
      continue;
    }
    const auto a = intern(r.u);
    const auto b = intern(r.v);
    const auto key = pair_key(a, b);
    auto [it, inserted] = slot_of.try_emplace(key, sums.size());
    if (inserted) {
      sums.emplace_back(key, r.weight);
    } else {
      sums[it->second].second += r.weight;
      ++local.merged;
    }
  }

  std::vector<SignedEdge> edges;
  edges.reserve(sums.size());
  for (const auto& [key, w] : sums) {
    if (w == 0.0) {
      ++local.zero_aggregates;
      continue;
    }
    edges.push_back({static_cast<Vertex>(key >> 32), static_cast<Vertex>(key & 0xffffffffU),
                     static_cast<std::int8_t>(w > 0 ? 1 : -1)});
  }
  if (stats) *stats = local;
  const auto n = labels.size();
  return SignedGraph::from_edges(n, edges, std::move(labels));
}

SignedGraph read_edge_list(std::istream& in, IngestStats* stats) {
  return from_edge_list(parse_edge_list(in), stats);
}

SignedGraph read_edge_list(const std::filesystem::path& path, IngestStats* stats) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_edge_list(in, stats);
}

void write_edge_list(std::ostream& out, const SignedGraph& g) {
  out << "# signed edge list: " << g.num_vertices() << " vertices, " << g.num_edges()
      << " edges\n";
  for (const auto& e : g.edges()) {
    out << g.label(e.u) << ' ' << g.label(e.v) << ' ' << int{e.sign} << '\n';
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace signbal
