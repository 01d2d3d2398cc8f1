#include "qwalk/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "qwalk/classical.hpp"
#include "qwalk/error.hpp"
#include "qwalk/exceptional.hpp"
#include "qwalk/sign_tracker.hpp"
#include "qwalk/szegedy.hpp"

namespace qwalk::cli {

namespace {

const std::set<std::string> kCommands = {"table1",     "walk",        "hitting", "mixing",
                                         "separation", "grid-reduce", "sample"};

[[noreturn]] void usage(const std::string& message) { throw Error(ErrorCode::usage, message); }

template <class T>
T get_field(const Json& j, const std::string& name) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    usage("invalid value for field '" + name + "'");
  }
}

std::vector<Vertex> labels_to_vertices(const Json& arr, const std::string& name) {
  if (!arr.is_array()) usage("field '" + name + "' must be an array of 1-based labels");
  std::vector<Vertex> out;
  for (const auto& v : arr) {
    const auto label = get_field<std::int64_t>(v, name);
    if (label < 1) usage("field '" + name + "' holds label " + std::to_string(label) +
                         "; labels are 1-based");
    out.push_back(static_cast<Vertex>(label - 1));
  }
  return out;
}

OutputFormat parse_format(const std::string& s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  if (s == "text") return OutputFormat::text;
  usage("field 'format' must be json, csv or text, got '" + s + "'");
}

GraphDesc parse_graph(const Json& g) {
  if (!g.is_object()) usage("field 'graph' must be an object");
  for (const auto& [key, value] : g.items()) {
    if (key != "kind" && key != "n" && key != "side" && key != "adjacency")
      usage("unknown field 'graph." + key + "'");
  }
  GraphDesc desc;
  const std::string kind = g.contains("kind") ? get_field<std::string>(g["kind"], "graph.kind")
                                              : std::string("cycle");
  if (kind == "cycle") {
    desc.kind = GraphKind::cycle;
    if (g.contains("side")) usage("field 'graph.side' is only valid for a torus");
    if (g.contains("n")) desc.size = get_field<std::size_t>(g["n"], "graph.n");
  } else if (kind == "torus") {
    desc.kind = GraphKind::torus_grid;
    if (g.contains("n")) usage("field 'graph.n' is not valid for a torus; use 'side'");
    if (g.contains("side")) desc.size = get_field<std::size_t>(g["side"], "graph.side");
  } else if (kind == "general") {
    desc.kind = GraphKind::general;
    if (!g.contains("adjacency")) usage("field 'graph.adjacency' is required for a general graph");
    for (const auto& row : g["adjacency"])
      desc.adjacency.push_back(labels_to_vertices(row, "graph.adjacency"));
    desc.size = desc.adjacency.size();
  } else {
    usage("field 'graph.kind' must be cycle, torus or general, got '" + kind + "'");
  }
  if (kind != "general" && g.contains("adjacency"))
    usage("field 'graph.adjacency' is only valid for a general graph");
  return desc;
}

Graph build_graph(const GraphDesc& desc) {
  switch (desc.kind) {
    case GraphKind::cycle: return cycle_graph(desc.size);
    case GraphKind::torus_grid: return torus_grid_graph(desc.size);
    case GraphKind::general: return Graph::from_adjacency(desc.adjacency);
  }
  return cycle_graph(desc.size);
}

GraphDesc graph_or(const RunConfig& c, GraphKind kind, std::size_t size) {
  GraphDesc desc = c.graph.value_or(GraphDesc{kind, size, {}});
  if (desc.size == 0) desc.size = size;
  return desc;
}

MarkedSet marked_or(const RunConfig& c, const Graph& g, std::vector<Vertex> fallback) {
  if (c.marked_diagonal) {
    if (g.kind() != GraphKind::torus_grid) usage("field 'marked': 'diagonal' needs a torus");
    return diagonal_marked_set(g.side());
  }
  std::vector<Vertex> vs = c.marked.value_or(std::move(fallback));
  for (Vertex v : vs)
    if (v >= g.size())
      usage("field 'marked' holds label " + std::to_string(v + 1) + " but the graph has " +
            std::to_string(g.size()) + " vertices");
  return MarkedSet(g.size(), std::move(vs));
}

double tolerance_of(const RunConfig& c, double fallback) {
  const double tol = c.tolerance.value_or(fallback);
  if (!(tol > 0.0)) usage("field 'tolerance' must be positive");
  return tol;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string key_value_text(const Json& j) {
  std::ostringstream os;
  for (const auto& [key, value] : j.items()) os << key << ": " << value.dump() << '\n';
  return os.str();
}

std::string flat_csv(const Json& j) {
  std::ostringstream header, row;
  bool first = true;
  for (const auto& [key, value] : j.items()) {
    if (value.is_array() || value.is_object()) continue;
    header << (first ? "" : ",") << key;
    row << (first ? "" : ",");
    if (value.is_string()) row << value.get<std::string>();
    else if (value.is_number_float()) row << format_double(value.get<double>());
    else row << value.dump();
    first = false;
  }
  return header.str() + "\n" + row.str() + "\n";
}

std::string emit(const Json& j, OutputFormat format) {
  switch (format) {
    case OutputFormat::json: return dump(j);
    case OutputFormat::csv: return flat_csv(j);
    case OutputFormat::text: return key_value_text(j);
  }
  return dump(j);
}

}  // namespace

RunConfig parse_config(const Json& j) {
  if (!j.is_object()) usage("config must be a JSON object");
  static const std::set<std::string> known = {
      "command", "graph", "marked", "steps", "trials",     "seed",       "epsilon",    "tolerance",
      "out",     "format", "k",     "start", "sweep",      "first_step", "half_steps", "walk_steps",
      "threads"};
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) usage("unknown field '" + key + "'");

  RunConfig c;
  if (j.contains("command")) {
    c.command = get_field<std::string>(j["command"], "command");
    if (!kCommands.contains(c.command)) usage("field 'command' names unknown command '" + c.command + "'");
  }
  if (j.contains("graph")) c.graph = parse_graph(j["graph"]);
  if (j.contains("marked")) {
    if (j["marked"].is_string()) {
      if (j["marked"].get<std::string>() != "diagonal")
        usage("field 'marked' must be an array of labels or \"diagonal\"");
      c.marked_diagonal = true;
    } else {
      c.marked = labels_to_vertices(j["marked"], "marked");
    }
  }
  if (j.contains("steps")) c.steps = get_field<std::uint64_t>(j["steps"], "steps");
  if (j.contains("trials")) c.trials = get_field<std::uint64_t>(j["trials"], "trials");
  if (j.contains("seed")) c.seed = get_field<std::uint64_t>(j["seed"], "seed");
  if (j.contains("epsilon")) c.epsilon = get_field<double>(j["epsilon"], "epsilon");
  if (j.contains("tolerance")) c.tolerance = get_field<double>(j["tolerance"], "tolerance");
  if (j.contains("out")) c.out = get_field<std::string>(j["out"], "out");
  if (j.contains("format")) c.format = parse_format(get_field<std::string>(j["format"], "format"));
  if (j.contains("k")) c.k = get_field<std::size_t>(j["k"], "k");
  if (j.contains("start")) {
    const auto label = get_field<std::int64_t>(j["start"], "start");
    if (label < 1) usage("field 'start' is a 1-based label");
    c.start = static_cast<Vertex>(label - 1);
  }
  if (j.contains("sweep")) {
    if (!j["sweep"].is_array()) usage("field 'sweep' must be an array of [n, k] pairs");
    for (const auto& pair : j["sweep"]) {
      const auto nk = get_field<std::vector<std::size_t>>(pair, "sweep");
      if (nk.size() != 2) usage("field 'sweep' entries must be [n, k] pairs");
      c.sweep.emplace_back(nk[0], nk[1]);
    }
  }
  if (j.contains("first_step")) c.first_step = get_field<std::uint32_t>(j["first_step"], "first_step");
  if (j.contains("half_steps")) c.half_steps = get_field<bool>(j["half_steps"], "half_steps");
  if (j.contains("walk_steps")) c.walk_steps = get_field<std::uint64_t>(j["walk_steps"], "walk_steps");
  if (j.contains("threads")) c.threads = get_field<unsigned>(j["threads"], "threads");
  return c;
}

RunConfig merge(RunConfig base, const RunConfig& o) {
  if (!o.command.empty()) base.command = o.command;
  if (o.graph) base.graph = o.graph;
  if (o.marked || o.marked_diagonal) {
    base.marked = o.marked;
    base.marked_diagonal = o.marked_diagonal;
  }
  auto take = [](auto& dst, const auto& src) {
    if (src) dst = src;
  };
  take(base.steps, o.steps);
  take(base.trials, o.trials);
  take(base.seed, o.seed);
  take(base.epsilon, o.epsilon);
  take(base.tolerance, o.tolerance);
  take(base.out, o.out);
  take(base.format, o.format);
  take(base.k, o.k);
  take(base.start, o.start);
  take(base.first_step, o.first_step);
  take(base.half_steps, o.half_steps);
  take(base.walk_steps, o.walk_steps);
  if (!o.sweep.empty()) base.sweep = o.sweep;
  if (o.threads != 0) base.threads = o.threads;
  return base;
}

// ---------------------------------------------------------------------------

std::string cmd_table1(const RunConfig& c) {
  const GraphDesc desc = graph_or(c, GraphKind::cycle, 6);
  if (desc.kind != GraphKind::cycle) usage("table1 needs a cycle graph");
  const Graph g = build_graph(desc);
  const MarkedSet m = marked_or(c, g, {0, 1, 3});
  const auto last = static_cast<std::uint32_t>(c.steps.value_or(5));
  const std::uint32_t first = c.first_step.value_or(std::min<std::uint32_t>(2, last));
  if (first > last) usage("field 'first_step' exceeds 'steps'");
  const SignTable table = sign_table(g.size(), m, last, first);
  switch (c.format.value_or(OutputFormat::text)) {
    case OutputFormat::csv: return sign_table_csv(table);
    case OutputFormat::json: return dump(to_json(table));
    case OutputFormat::text: return sign_table_text(table);
  }
  return sign_table_text(table);
}

std::string cmd_walk(const RunConfig& c) {
  const Graph g = build_graph(graph_or(c, GraphKind::cycle, 6));
  const MarkedSet m = marked_or(c, g, {0, 1, 3});
  const std::uint64_t steps = c.steps.value_or(6);
  if (steps < 1) usage("field 'steps' must be at least 1");
  const double tol = tolerance_of(c, 1e-10);
  const SearchWalk walk = SearchWalk::for_graph(g, m);
  const auto trajectory = evolve(walk, static_cast<std::uint32_t>(steps), c.half_steps.value_or(true));
  const ExceptionalReport report = verify_exceptional(walk, steps, tol);
  const double return_residual = walk.kernels().max_abs_diff(trajectory.back().state.amplitudes(),
                                                             trajectory.front().state.amplitudes());
  const auto format = c.format.value_or(OutputFormat::json);
  if (format == OutputFormat::csv) return trajectory_csv(trajectory);
  Json j;
  j["graph"] = {{"kind", to_string(g.kind())}, {"vertices", g.size()}};
  j["report"] = to_json(report);
  j["final_vs_initial_residual"] = return_residual;
  if (format == OutputFormat::text) return key_value_text(j);
  j["basis"] = Json::array();
  for (const auto& [x, y] : walk.basis().pairs()) j["basis"].push_back({x + 1, y + 1});
  j["trajectory"] = trajectory_json(trajectory);
  return dump(j);
}

std::string cmd_hitting(const RunConfig& c) {
  const Graph g = build_graph(graph_or(c, GraphKind::cycle, 6));
  const MarkedSet m = marked_or(c, g, {0});
  const std::uint64_t trials = c.trials.value_or(100000);
  if (trials < 1) usage("field 'trials' must be at least 1");
  const HittingReport r = simulate_hitting_time(g, m, trials, c.seed.value_or(1), c.threads);
  return emit(to_json(r), c.format.value_or(OutputFormat::json));
}

std::string cmd_mixing(const RunConfig& c) {
  const Graph g = build_graph(graph_or(c, GraphKind::cycle, 11));
  const Vertex start = c.start.value_or(0);
  if (start >= g.size()) usage("field 'start' is outside the graph");
  const double eps = c.epsilon.value_or(0.01);
  if (!(eps > 0.0 && eps < 1.0)) usage("field 'epsilon' must lie in (0, 1)");
  const MixingReport r = cesaro_mixing_time(transition_matrix(g), start, eps);
  return emit(to_json(r), c.format.value_or(OutputFormat::json));
}

std::string cmd_separation(const RunConfig& c) {
  std::vector<std::pair<std::size_t, std::size_t>> rows = c.sweep;
  if (rows.empty()) {
    if (c.graph || c.k) {
      const std::size_t n = graph_or(c, GraphKind::cycle, 16).size;
      const auto root = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
      rows.emplace_back(n, c.k.value_or(root));
    } else {
      rows = {{16, 4}, {64, 8}, {256, 16}};
    }
  }
  std::vector<SeparationReport> reports;
  for (const auto& [n, k] : rows) {
    if (k < 1 || k >= n)
      usage("separation needs 1 <= k < n, got n=" + std::to_string(n) + " k=" + std::to_string(k));
    reports.push_back(separation_report(n, k));
  }
  const auto format = c.format.value_or(OutputFormat::csv);
  if (format == OutputFormat::csv) return separation_csv(reports);
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  if (format == OutputFormat::text) {
    std::string text;
    for (const auto& r : arr) text += key_value_text(r) + "\n";
    return text;
  }
  return dump(arr);
}

std::string cmd_grid_reduce(const RunConfig& c) {
  std::size_t side = 5;
  if (c.graph) {
    if (c.graph->kind != GraphKind::torus_grid) usage("grid-reduce needs a torus graph");
    if (c.graph->size != 0) side = c.graph->size;
  }
  const std::uint64_t steps = c.steps.value_or(50);
  const GridReductionReport r = verify_grid_reduction(side, steps, tolerance_of(c, 1e-10));
  return emit(to_json(r), c.format.value_or(OutputFormat::json));
}

std::string cmd_sample(const RunConfig& c) {
  const std::uint64_t trials = c.trials.value_or(100000);
  if (trials < 1) usage("field 'trials' must be at least 1");
  const std::uint64_t seed = c.seed.value_or(1);
  SamplingReport r;
  if (c.graph || c.marked || c.marked_diagonal) {
    const Graph g = build_graph(graph_or(c, GraphKind::cycle, 9));
    const MarkedSet m = marked_or(c, g, {0, 1, 2});
    if (m.empty()) usage("field 'marked' must name at least one vertex");
    if (c.walk_steps) {
      r = measured_sampling_cost(SearchWalk::for_graph(g, m), *c.walk_steps, trials, seed,
                                 c.threads);
    } else {
      r = sampling_search_cost(m, trials, seed, c.threads);
    }
  } else {
    const std::size_t n = 9;
    const std::size_t k = c.k.value_or(3);
    if (k < 1 || k > n) usage("field 'k' must lie in [1, n]");
    r = sampling_search_cost(n, k, trials, seed, c.threads);
  }
  return emit(to_json(r), c.format.value_or(OutputFormat::json));
}

std::string run_command(const RunConfig& c) {
  if (c.command == "table1") return cmd_table1(c);
  if (c.command == "walk") return cmd_walk(c);
  if (c.command == "hitting") return cmd_hitting(c);
  if (c.command == "mixing") return cmd_mixing(c);
  if (c.command == "separation") return cmd_separation(c);
  if (c.command == "grid-reduce") return cmd_grid_reduce(c);
  if (c.command == "sample") return cmd_sample(c);
  usage("unknown command '" + c.command + "'");
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Vertex> parse_label_list(const std::string& text, const std::string& name) {
  std::vector<Vertex> out;
  if (text.empty() || text == "none") return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long label = std::stoll(item, &used);
      if (used != item.size() || label < 1) throw std::invalid_argument(item);
      out.push_back(static_cast<Vertex>(label - 1));
    } catch (const std::exception&) {
      usage("flag '--" + name + "' expects comma-separated 1-based labels, got '" + text + "'");
    }
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> parse_sweep(const std::string& text) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    try {
      if (colon == std::string::npos) throw std::invalid_argument(item);
      out.emplace_back(std::stoull(item.substr(0, colon)), std::stoull(item.substr(colon + 1)));
    } catch (const std::exception&) {
      usage("flag '--sweep' expects n:k pairs separated by commas, got '" + text + "'");
    }
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Szegedy quantum walk search and classical hitting-time experiments", "qwalk"};
  app.require_subcommand(1);

  std::string config_path, format, out_path, kind, marked_text, sweep_text;
  std::uint64_t seed = 0, steps = 0, trials = 0, walk_steps = 0;
  std::size_t n = 0, side = 0, k = 0, start = 0;
  std::uint32_t first_step = 0;
  double epsilon = 0.0, tolerance = 0.0;
  bool no_half_steps = false;
  unsigned threads = 0;

  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--out", out_path, "Output file (default: stdout)");
  app.add_option("--kind", kind, "Graph kind")->check(CLI::IsMember({"cycle", "torus"}));
  app.add_option("--n", n, "Cycle length");
  app.add_option("--side", side, "Torus side length");
  app.add_option("--marked", marked_text, "Marked vertices: 1-based list, 'none' or 'diagonal'");
  app.add_option("--steps", steps, "Walk steps");
  app.add_option("--trials", trials, "Monte Carlo trials");
  app.add_option("--epsilon", epsilon, "Mixing threshold");
  app.add_option("--tol", tolerance, "Tolerance");
  app.add_option("--k", k, "Number of marked vertices");
  app.add_option("--start", start, "1-based start vertex");
  app.add_option("--sweep", sweep_text, "Separation sweep as n:k,n:k,...");
  app.add_option("--first-step", first_step, "First power shown by table1");
  app.add_option("--walk-steps", walk_steps, "Walk steps before each measurement (sample)");
  app.add_option("--threads", threads, "Worker threads for Monte Carlo");
  app.add_flag("--no-half-steps", no_half_steps, "Record only full steps (walk)");

  for (const std::string& name : kCommands) app.add_subcommand(name)->fallthrough();
  app.get_subcommand("table1")->description("Sign table of the search walk on a cycle");
  app.get_subcommand("walk")->description("Evolve the search walk and check the sign-flip property");
  app.get_subcommand("hitting")->description("Exact and Monte Carlo classical hitting time");
  app.get_subcommand("mixing")->description("Cesaro mixing time of the classical walk");
  app.get_subcommand("separation")->description("Quantum sampling vs classical hitting-time costs");
  app.get_subcommand("grid-reduce")->description("Torus with marked diagonal vs its cycle reduction");
  app.get_subcommand("sample")->description("Expected guesses of repeated sampling");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run 'qwalk --help' for usage\n";
    return 2;
  }

  try {
    RunConfig file_config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) usage("cannot read config file '" + config_path + "'");
      Json j;
      try {
        j = Json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        usage("config file '" + config_path + "' is not valid JSON: " + e.what());
      }
      file_config = parse_config(j);
    }

    RunConfig flags;
    flags.command = app.get_subcommands().front()->get_name();
    if (!file_config.command.empty() && file_config.command != flags.command)
      usage("field 'command' in the config says '" + file_config.command + "' but '" +
            flags.command + "' was requested");
    auto set = [&](const char* name) { return app.count(name) > 0; };
    if (set("--seed")) flags.seed = seed;
    if (set("--format")) flags.format = parse_format(format);
    if (set("--out")) flags.out = out_path;
    if (set("--kind") || set("--n") || set("--side")) {
      GraphDesc desc = file_config.graph.value_or(GraphDesc{});
      if (set("--kind")) desc.kind = kind == "torus" ? GraphKind::torus_grid : GraphKind::cycle;
      else if (set("--side") && !set("--n")) desc.kind = GraphKind::torus_grid;
      if (set("--n")) desc.size = n;
      if (set("--side")) desc.size = side;
      flags.graph = desc;
    }
    if (set("--marked")) {
      if (marked_text == "diagonal") flags.marked_diagonal = true;
      else flags.marked = parse_label_list(marked_text, "marked");
    }
    if (set("--steps")) flags.steps = steps;
    if (set("--trials")) flags.trials = trials;
    if (set("--epsilon")) flags.epsilon = epsilon;
    if (set("--tol")) flags.tolerance = tolerance;
    if (set("--k")) flags.k = k;
    if (set("--start")) {
      if (start < 1) usage("flag '--start' is a 1-based label");
      flags.start = static_cast<Vertex>(start - 1);
    }
    if (set("--sweep")) flags.sweep = parse_sweep(sweep_text);
    if (set("--first-step")) flags.first_step = first_step;
    if (set("--walk-steps")) flags.walk_steps = walk_steps;
    if (set("--threads")) flags.threads = threads;
    if (no_half_steps) flags.half_steps = false;

    const RunConfig config = merge(file_config, flags);
    const std::string artifact = run_command(config);
    if (config.out && !config.out->empty() && *config.out != "-") {
      std::ofstream file(*config.out, std::ios::binary);
      if (!file) throw Error(ErrorCode::inconsistency, "cannot write '" + *config.out + "'");
      file << artifact;
    } else {
      out << artifact;
    }
    return 0;
  } catch (const Error& e) {
    err << (e.code() == ErrorCode::usage ? "usage error: " : "error: ") << e.what() << "\n";
    return e.code() == ErrorCode::usage ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qwalk::cli
