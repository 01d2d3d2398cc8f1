#pragma once

// JSON and CSV forms of every report. Vertex labels in files are 1-based;
// exact rationals are written as "p/q" next to a float field.

#include <json.hpp>
#include <string>
#include <vector>

#include "qwalk/classical.hpp"
#include "qwalk/exceptional.hpp"
#include "qwalk/sign_tracker.hpp"
#include "qwalk/szegedy.hpp"

namespace qwalk {

using Json = nlohmann::ordered_json;

Json to_json(const HittingReport& r);
Json to_json(const MixingReport& r);
Json to_json(const ExceptionalReport& r);
Json to_json(const SamplingReport& r);
Json to_json(const SeparationReport& r);
Json to_json(const GridReductionReport& r);
Json to_json(const SignTable& t);
Json trajectory_json(const std::vector<TrajectoryPoint>& trajectory);

HittingReport hitting_report_from_json(const Json& j);
MixingReport mixing_report_from_json(const Json& j);
ExceptionalReport exceptional_report_from_json(const Json& j);
SamplingReport sampling_report_from_json(const Json& j);
SeparationReport separation_report_from_json(const Json& j);
GridReductionReport grid_reduction_report_from_json(const Json& j);

std::string separation_csv(const std::vector<SeparationReport>& rows);
/// One row per recorded state: stage label, then one column per basis edge.
std::string trajectory_csv(const std::vector<TrajectoryPoint>& trajectory);

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

}  // namespace qwalk
