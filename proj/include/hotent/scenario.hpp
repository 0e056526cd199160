#pragma once

#include "hotent/dynamics.hpp"
#include "hotent/effective_rates.hpp"
#include "hotent/master_equation.hpp"
#include "hotent/units.hpp"

#include <json.hpp>

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hotent {

using json = nlohmann::json;

enum class ScenarioKind { Fig2Comparison, Fig3Nondegenerate, Fig4Degenerate, Fig5Thermal, CustomSweep };
enum class GeneratorKind { FullSecular, FilteredNondegenerate, FilteredDegenerate };

std::string to_string(ScenarioKind k);
std::string to_string(GeneratorKind k);

/// Settings of the abstract two-resonator comparison (D_ent against the
/// reference Liouvillian). Everything is already dimensionless.
struct ComparisonParams {
  std::array<double, 2> omega{1.0, 1.0};
  double alpha = 0.2;
  double rate = 0.1;
  double n_a = 0.0;
  ArenzParams reference{0.1, 0.1, 0.2};
  bool free_hamiltonian = true;
};

struct InitialSpec {
  bool thermal = false;
  std::array<double, 2> nbar{0.0, 0.0};
  bool ancilla_excited = false;
};

struct IntegrationSpec {
  double t_final = 0.0;
  double stride = 0.0;
  double rtol = 1e-8;
  double atol = 1e-10;
  bool settle = false; // stop early once E_N and populations stop moving
};

/// One fully resolved curve, in units with omega_a = 1.
struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::CustomSweep;
  GeneratorKind generator = GeneratorKind::FilteredNondegenerate;
  double nu_a_hz = 10e9;
  SystemParams system;
  BathSet baths;
  ComparisonParams comparison;
  InitialSpec initial;
  int truncation = 10;
  IntegrationSpec integration;
  bool free_hamiltonian = false;
  std::string time_unit = "omega_a";
  double time_scale = 1.0;
  std::string output_dir = "out";
  std::vector<std::string> warnings;
  json conversions = json::object(); // input string -> scaled value, by key path
};

/// Reads a config file. Parse errors carry line and column. A run manifest
/// is accepted too; its embedded config is returned.
json load_document(const std::string& path);
json parse_document(const std::string& text, const std::string& origin = "<config>");

/// Best-effort line of a dotted key path in the config text (0 if not found).
int locate_key_line(const std::string& text, const std::string& key_path);

/// Parses "key=value"; the value is read as JSON when possible, else as a string.
std::pair<std::string, json> parse_assignment(const std::string& text);
/// Sets a dotted key path (array indices as numbers), creating objects on the way.
void apply_override(json& doc, const std::string& key, const json& value);

/// Validates and converts one configuration document.
ScenarioConfig resolve(const json& doc);

/// Documents of every curve the scenario defines (overrides applied).
std::vector<std::pair<std::string, json>> curve_documents(const json& doc);

HilbertGeometry geometry_for(const ScenarioConfig& c);
Liouvillian build_liouvillian(const ScenarioConfig& c);
/// Initial state in the integration frame.
DensityState initial_state(const ScenarioConfig& c, const HilbertGeometry& g);
Observer observer_for(const ScenarioConfig& c, const HilbertGeometry& g);

struct CurveResult {
  std::string name;
  ScenarioConfig config;
  Trajectory trajectory;
  json manifest;
};

struct RunOptions {
  std::optional<std::string> output_dir; // overrides the config
  bool write_files = true;
  bool convergence = false;
};

struct RunResult {
  std::vector<CurveResult> curves;
  json manifest;
};

/// Runs a single resolved curve (no files).
Trajectory run_curve(const ScenarioConfig& c);

RunResult run_scenario(const json& doc, const RunOptions& opts = {});

struct SweepRow {
  json value;
  double peak_EN = 0.0;
  double late_EN = 0.0;
  double margin = 0.0; // cooling-dominance margin, NaN when not applicable
};

/// Sweep axes: T_h, T_i, alpha, N.
std::vector<SweepRow> run_sweep(const json& doc, const std::string& axis, const std::vector<json>& values);
void write_sweep_csv(std::ostream& os, const std::string& axis, const std::vector<SweepRow>& rows);

/// Validation plus the term audit of every curve, without integrating.
json check_scenario(const json& doc);

} // namespace hotent
