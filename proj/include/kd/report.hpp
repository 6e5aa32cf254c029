#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kd/verify.hpp"

namespace kd {

enum class Stage { Kahan = 1, Factor = 2, Darboux = 3, Structure = 4 };
enum class ReportFormat { Text, Json };

struct PipelineConfig {
  std::string ode_path;
  std::string ode_text;  // used when non-empty, otherwise ode_path is read
  int max_dp_degree = 3;
  int max_exp = 2;
  std::size_t candidate_cap = 10000;
  bool prune = true;
  std::uint64_t seed = 1;
  ReportFormat format = ReportFormat::Text;
  bool verify = false;
  Stage last_stage = Stage::Structure;

  void validate() const;  // throws InvalidInput
};

enum class Certificate { Symbolic, Numeric, Unverified };
std::string certificate_name(Certificate c);

struct StageError {
  std::string stage;
  std::string kind;
  std::string message;
  int exit_code = 1;
};

struct VerificationEntry {
  std::string claim;
  bool passed = false;
  bool skipped = false;
  double observed = 0;
  std::string detail;
};

struct StructureReport {
  PipelineConfig config;
  std::optional<QuadraticOde> ode;
  std::optional<BirationalMap> map;
  std::optional<JacobianData> jacobian;
  std::optional<FactorBasis> basis;
  std::optional<DarbouxSearch> search;
  std::vector<ContinuumPair> continuum;
  std::vector<std::string> continuum_notes;
  std::vector<Combination> combinations;           // continuum level
  std::vector<Combination> discrete_combinations;  // map level
  std::vector<Combination> small_first_integrals;  // alternative small forms
  std::optional<ClosedFormSolution> solution;
  std::string solution_note;
  std::vector<VerificationEntry> verification;
  bool verification_ran = false;
  std::vector<StageError> errors;
  std::map<std::string, double> timing_seconds;  // text output only

  int exit_code() const;
};

// Steps 1-3 up to config.last_stage; a failing stage is recorded in
// `errors` and later stages are skipped, earlier results are kept.
StructureReport run_pipeline(const PipelineConfig& config);

// Numeric and exact-sampling checks of every claim in the report.
void run_verification(StructureReport& report);

// "schema": 1 JSON (no timing) or human-readable text.
std::string emit_report(const StructureReport& report, ReportFormat format);

// Inverse of the JSON form: emit_report(read_report(s), Json) == s for any
// s produced by emit_report.
StructureReport read_report(const std::string& json_text);

// Irreducible pairs used for combinations.
std::vector<DarbouxPair> irreducible_pairs(const DarbouxSearch& search);

// Default initial point for trajectory checks: 0.3, 0.4, 0.5, ...
std::vector<double> default_initial_point(int n);

}  // namespace kd
