#include "qwalk/reports.hpp"

#include <charconv>
#include <sstream>

#include "qwalk/error.hpp"

namespace qwalk {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

Json one_based(const std::vector<Vertex>& vs) {
  Json arr = Json::array();
  for (Vertex v : vs) arr.push_back(v + 1);
  return arr;
}

std::vector<Vertex> zero_based(const Json& arr) {
  std::vector<Vertex> out;
  for (const auto& v : arr) {
    const auto label = v.get<std::int64_t>();
    if (label < 1) throw Error(ErrorCode::usage, "vertex labels are 1-based");
    out.push_back(static_cast<Vertex>(label - 1));
  }
  return out;
}

template <class T>
T field(const Json& j, const char* name) {
  if (!j.contains(name)) throw Error(ErrorCode::usage, std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::usage, std::string("bad value for field '") + name + "'");
  }
}

}  // namespace

Json to_json(const HittingReport& r) {
  Json j;
  j["exact_value"] = r.exact_value;
  if (r.exact_rational) j["exact_rational"] = to_fraction_string(*r.exact_rational);
  j["mc_estimate"] = r.mc_estimate;
  j["mc_stderr"] = r.mc_stderr;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  return j;
}

HittingReport hitting_report_from_json(const Json& j) {
  HittingReport r;
  r.exact_value = field<double>(j, "exact_value");
  if (j.contains("exact_rational"))
    r.exact_rational = parse_fraction(field<std::string>(j, "exact_rational"));
  r.mc_estimate = field<double>(j, "mc_estimate");
  r.mc_stderr = field<double>(j, "mc_stderr");
  r.trials = field<std::uint64_t>(j, "trials");
  r.seed = field<std::uint64_t>(j, "seed");
  return r;
}

Json to_json(const MixingReport& r) {
  Json j;
  j["epsilon"] = r.epsilon;
  j["time_steps"] = r.time_steps;
  j["final_tv_distance"] = r.final_tv_distance;
  return j;
}

MixingReport mixing_report_from_json(const Json& j) {
  return MixingReport{field<double>(j, "epsilon"), field<std::uint64_t>(j, "time_steps"),
                      field<double>(j, "final_tv_distance")};
}

Json to_json(const ExceptionalReport& r) {
  Json j;
  j["n"] = r.n;
  j["marked"] = one_based(r.marked);
  j["steps"] = r.steps;
  j["max_magnitude_deviation"] = r.max_magnitude_deviation;
  j["max_selfloop"] = r.max_selfloop;
  j["max_distribution_deviation"] = r.max_distribution_deviation;
  j["tolerance"] = r.tolerance;
  j["verdict"] = r.verdict;
  return j;
}

ExceptionalReport exceptional_report_from_json(const Json& j) {
  ExceptionalReport r;
  r.n = field<std::size_t>(j, "n");
  r.marked = zero_based(field<Json>(j, "marked"));
  r.steps = field<std::uint64_t>(j, "steps");
  r.max_magnitude_deviation = field<double>(j, "max_magnitude_deviation");
  r.max_selfloop = field<double>(j, "max_selfloop");
  r.max_distribution_deviation = field<double>(j, "max_distribution_deviation");
  r.tolerance = field<double>(j, "tolerance");
  r.verdict = field<bool>(j, "verdict");
  return r;
}

Json to_json(const SamplingReport& r) {
  Json j;
  j["n"] = r.n;
  j["k"] = r.k;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["walk_steps"] = r.walk_steps;
  j["success_probability"] = r.success_probability;
  j["mean"] = r.mean;
  j["stderr"] = r.stderr_samples;
  return j;
}

SamplingReport sampling_report_from_json(const Json& j) {
  SamplingReport r;
  r.n = field<std::size_t>(j, "n");
  r.k = field<std::size_t>(j, "k");
  r.trials = field<std::uint64_t>(j, "trials");
  r.seed = field<std::uint64_t>(j, "seed");
  r.walk_steps = field<std::uint64_t>(j, "walk_steps");
  r.success_probability = field<double>(j, "success_probability");
  r.mean = field<double>(j, "mean");
  r.stderr_samples = field<double>(j, "stderr");
  return r;
}

Json to_json(const SeparationReport& r) {
  Json j;
  j["n"] = r.n;
  j["k"] = r.k;
  j["quantum_samples"] = r.quantum_samples;
  j["classical_ht"] = to_fraction_string(r.classical_ht);
  j["classical_ht_value"] = to_double(r.classical_ht);
  j["ratio"] = r.ratio;
  j["quantum_total_with_mixing"] = r.quantum_total_with_mixing;
  j["classical_total_with_mixing"] = r.classical_total_with_mixing;
  j["model_fields"] = {"quantum_total_with_mixing", "classical_total_with_mixing"};
  return j;
}

SeparationReport separation_report_from_json(const Json& j) {
  SeparationReport r;
  r.n = field<std::size_t>(j, "n");
  r.k = field<std::size_t>(j, "k");
  r.quantum_samples = field<double>(j, "quantum_samples");
  r.classical_ht = parse_fraction(field<std::string>(j, "classical_ht"));
  r.ratio = field<double>(j, "ratio");
  r.quantum_total_with_mixing = field<double>(j, "quantum_total_with_mixing");
  r.classical_total_with_mixing = field<double>(j, "classical_total_with_mixing");
  return r;
}

Json to_json(const GridReductionReport& r) {
  Json j;
  j["side"] = r.side;
  j["steps"] = r.steps;
  j["max_symmetry_deviation"] = r.max_symmetry_deviation;
  j["max_distribution_deviation"] = r.max_distribution_deviation;
  j["max_class_deviation"] = r.max_class_deviation;
  j["expected_guesses"] = r.expected_guesses;
  j["tolerance"] = r.tolerance;
  j["verdict"] = r.verdict;
  return j;
}

GridReductionReport grid_reduction_report_from_json(const Json& j) {
  GridReductionReport r;
  r.side = field<std::size_t>(j, "side");
  r.steps = field<std::uint64_t>(j, "steps");
  r.max_symmetry_deviation = field<double>(j, "max_symmetry_deviation");
  r.max_distribution_deviation = field<double>(j, "max_distribution_deviation");
  r.max_class_deviation = field<double>(j, "max_class_deviation");
  r.expected_guesses = field<double>(j, "expected_guesses");
  r.tolerance = field<double>(j, "tolerance");
  r.verdict = field<bool>(j, "verdict");
  return r;
}

Json to_json(const SignTable& t) {
  Json j;
  j["stages"] = t.stages;
  j["edges"] = t.edges;
  Json rows = Json::array();
  for (const auto& row : t.entries) {
    Json r = Json::array();
    for (std::int8_t v : row) r.push_back(v > 0 ? "+" : "-");
    rows.push_back(std::move(r));
  }
  j["entries"] = std::move(rows);
  return j;
}

Json trajectory_json(const std::vector<TrajectoryPoint>& trajectory) {
  Json arr = Json::array();
  for (const auto& point : trajectory) {
    Json j;
    j["stage"] = point.stage.label();
    j["amplitudes"] = std::vector<double>(point.state.amplitudes().begin(),
                                          point.state.amplitudes().end());
    arr.push_back(std::move(j));
  }
  return arr;
}

std::string separation_csv(const std::vector<SeparationReport>& rows) {
  std::ostringstream os;
  os << "n,k,quantum_samples,classical_ht,classical_ht_value,ratio,"
        "quantum_total_with_mixing_model,classical_total_with_mixing_model\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.k << ',' << format_double(r.quantum_samples) << ','
       << to_fraction_string(r.classical_ht) << ',' << format_double(to_double(r.classical_ht))
       << ',' << format_double(r.ratio) << ',' << format_double(r.quantum_total_with_mixing)
       << ',' << format_double(r.classical_total_with_mixing) << '\n';
  }
  return os.str();
}

std::string trajectory_csv(const std::vector<TrajectoryPoint>& trajectory) {
  std::ostringstream os;
  os << "stage";
  if (!trajectory.empty()) {
    for (const auto& [x, y] : trajectory.front().state.basis().pairs())
      os << ",\"|" << x + 1 << ',' << y + 1 << ">\"";
  }
  os << '\n';
  for (const auto& point : trajectory) {
    os << point.stage.label();
    for (double a : point.state.amplitudes()) os << ',' << format_double(a);
    os << '\n';
  }
  return os.str();
}

}  // namespace qwalk
