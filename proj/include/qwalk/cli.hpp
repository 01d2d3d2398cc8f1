#pragma once

// Command-line front end. Each command turns a RunConfig into the bytes of
// one output artifact; run_cli handles argument parsing, config loading and
// exit codes (0 success, 2 usage error, 1 runtime error).

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/reports.hpp"

namespace qwalk::cli {

enum class OutputFormat { json, csv, text };

struct GraphDesc {
  GraphKind kind = GraphKind::cycle;
  std::size_t size = 0;  // n for a cycle, side for a torus; 0 means command default
  std::vector<std::vector<Vertex>> adjacency;  // general graphs, 0-based
};

struct RunConfig {
  std::string command;
  std::optional<GraphDesc> graph;
  std::optional<std::vector<Vertex>> marked;  // 0-based after loading
  bool marked_diagonal = false;
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> epsilon;
  std::optional<double> tolerance;
  std::optional<std::string> out;
  std::optional<OutputFormat> format;
  std::optional<std::size_t> k;
  std::optional<Vertex> start;  // 0-based after loading
  std::vector<std::pair<std::size_t, std::size_t>> sweep;
  std::optional<std::uint32_t> first_step;
  std::optional<bool> half_steps;
  std::optional<std::uint64_t> walk_steps;
  unsigned threads = 0;
};

/// Parses a JSON config. Vertex labels are 1-based in the file. Unknown
/// fields and out-of-range values throw Error(usage) naming the field.
RunConfig parse_config(const Json& j);
/// Overwrites every field of base that is set in overlay.
RunConfig merge(RunConfig base, const RunConfig& overlay);

std::string cmd_table1(const RunConfig& config);
std::string cmd_walk(const RunConfig& config);
std::string cmd_hitting(const RunConfig& config);
std::string cmd_mixing(const RunConfig& config);
std::string cmd_separation(const RunConfig& config);
std::string cmd_grid_reduce(const RunConfig& config);
std::string cmd_sample(const RunConfig& config);

/// Dispatches on config.command.
std::string run_command(const RunConfig& config);

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qwalk::cli
