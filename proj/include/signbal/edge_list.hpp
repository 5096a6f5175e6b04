#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "signbal/graph.hpp"

namespace signbal {

struct EdgeRecord {
  std::string u;
  std::string v;
  double weight;
};

// What from_edge_list did to the raw records.
struct IngestStats {
  std::size_t records = 0;
  std::size_t self_loops = 0;
  std::size_t zero_weight = 0;       // rejected records (counted as warnings)
  std::size_t merged = 0;            // records folded into an earlier pair
  std::size_t zero_aggregates = 0;   // pairs whose weights summed to 0
};

// Self-loops dropped, repeated unordered pairs summed, zero sums dropped,
// sign of the sum kept. Dense indices follow first appearance of a label in
// an accepted record.
SignedGraph from_edge_list(const std::vector<EdgeRecord>& records, IngestStats* stats = nullptr);

// Text format: `u v w` per line, separated by whitespace and/or commas. An
// optional fourth column (e.g. a timestamp) is ignored. Lines starting with
// `#` or `%` and blank lines are skipped.
std::vector<EdgeRecord> parse_edge_list(std::istream& in);

SignedGraph read_edge_list(std::istream& in, IngestStats* stats = nullptr);
SignedGraph read_edge_list(const std::filesystem::path& path, IngestStats* stats = nullptr);

// Canonical order (u < v by dense index), labels and +1/-1 weights.
void write_edge_list(std::ostream& out, const SignedGraph& g);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace signbal
