#pragma once

#include "replicator/controllability.hpp"
#include "replicator/dynamics.hpp"
#include "replicator/fitness.hpp"
#include "replicator/variational.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace replicator::io {

using Json = nlohmann::json;

/// Shortest-free fixed format used for every floating value written to CSV: 17 significant digits.
std::string format_double(double v);

/// Parses "1,2,3" (whitespace tolerated). Throws ArgumentError on malformed input.
Vector parse_vector_list(const std::string& text);

/// Fitness model schema:
///   {"type":"constant","a":[...]}
///   {"type":"linear","B":[[...],...]}
///   {"type":"generator","R":[[...],...]}
/// Matrices are row-major lists of rows.
FitnessModel model_from_json(const Json& j);
/// Custom models have no serialized form and throw ArgumentError.
Json model_to_json(const FitnessModel& f);

Matrix matrix_from_json(const Json& j);
Json matrix_to_json(const Matrix& M);

Json read_json_file(const std::string& path);
FitnessModel load_model(const std::string& path);
/// Accepts a bare matrix or any model object carrying "A", "B" or "R".
Matrix load_matrix(const std::string& path);

/// Header `t,x1,...,xn`, one row per state.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& is);

/// Header `t,y1,...,y{n-1},p1,...,p{n-1},H`.
void write_phase_csv(std::ostream& os, const PhaseTrajectory& traj);
PhaseTrajectory read_phase_csv(std::istream& is);

Json to_json(const BracketReport& r);
Json to_json(const PeriodicOrbitReport& r);
Json to_json(const ControllabilityReport& r);

}  // namespace replicator::io
