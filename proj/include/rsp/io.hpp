#pragma once

#include "rsp/asymptotics.hpp"
#include "rsp/dynamics.hpp"
#include "rsp/harness.hpp"
#include "rsp/inference.hpp"
#include "rsp/network.hpp"
#include "rsp/spectral.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rsp {

using Json = nlohmann::json;

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

Json to_json(const WeightedNetwork& net);
WeightedNetwork network_from_json(const Json& j);

Json to_json(const SpectralData& spec);
SpectralData spectral_from_json(const Json& j);

Json to_json(const RegimeClassification& regime);
RegimeClassification regime_from_json(const Json& j);

Json to_json(const CovarianceReport& report);
CovarianceReport covariance_from_json(const Json& j);

Json to_json(const ConfidenceInterval& ci);
ConfidenceInterval interval_from_json(const Json& j);

Json to_json(const TestResult& result);
TestResult test_result_from_json(const Json& j);

struct TrajectorySummary {
  long final_step = 0;
  Vector final_state;
  std::optional<double> z_tilde;  // absent for reducible networks
  double spread = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
};

TrajectorySummary summarize(const Trajectory& trajectory);
Json to_json(const TrajectorySummary& summary);
TrajectorySummary trajectory_summary_from_json(const Json& j);
/// Header `n,Z_1,...,Z_N`, one row per recorded snapshot.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

Json to_json(const NetworkSpec& spec);
NetworkSpec network_spec_from_json(const Json& j);
Json to_json(const CheckSpec& check);
CheckSpec check_from_json(const Json& j);
Json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const Json& j);
/// Accepts either {"experiments": [...]} or a single experiment object.
std::vector<ExperimentConfig> suite_from_json(const Json& j);

Json to_json(const EnsembleSummary& summary);
EnsembleSummary ensemble_summary_from_json(const Json& j);
Json to_json(const CheckReport& report);
CheckReport check_report_from_json(const Json& j);
void write_report_csv(std::ostream& out, const CheckReport& report);

/// Parses a file; throws Error(InvalidConfig) with the path on failure.
Json read_json_file(const std::string& path);

}  // namespace rsp
