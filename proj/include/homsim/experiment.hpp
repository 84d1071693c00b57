#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "homsim/fit.hpp"
#include "homsim/optics.hpp"
#include "homsim/serialize.hpp"

namespace homsim {

enum class InterferenceUnit : std::uint8_t { Bs, Pbs };

/// What the source emits: a full hyper-entangled label or a single-DoF Bell
/// label.
struct SourceState {
  std::variant<HyperLabel, PolBellLabel, OamBellLabel> value{
      HyperLabel{PolBellLabel::PhiPlus, OamBellLabel::NuPlus}};

  bool is_hyper() const { return std::holds_alternative<HyperLabel>(value); }
  bool is_oam() const { return std::holds_alternative<OamBellLabel>(value); }
  std::string label() const;
};

bool operator==(const SourceState& a, const SourceState& b);

struct ExperimentSpec {
  SourceState source;
  InterferenceUnit unit = InterferenceUnit::Bs;
  SpectralModel spectral;  // 780 nm center, 3 nm filter, zero floor
  /// Delay window in seconds; defaults to +-3 coherence times when unset.
  std::optional<std::pair<double, double>> delay_range;
  int points = 41;
  double pairs_per_point = 2000.0;
  double accidental_rate = 0.0;
  std::uint64_t seed = 1;
  int theta_points = 32;
  std::string output;  // base path for artifacts; derived from state when empty
  /// Replaces the automatic preparation recipe when non-empty. Set
  /// programmatically; the file grammar has no key for it.
  std::vector<ElementSetting> prep_overrides;

  ScanConfig scan_config() const;
};

bool operator==(const ExperimentSpec& a, const ExperimentSpec& b);

struct ParseDiagnostic {
  enum class Severity : std::uint8_t { Error, Warning };
  int line = 1;    // 1-based
  int column = 1;  // 1-based
  Severity severity = Severity::Error;
  std::string message;
};

/// A spec is produced only when no Error diagnostics were raised; a partial
/// spec is never returned.
struct ParseResult {
  std::optional<ExperimentSpec> spec;
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const { return spec.has_value(); }
};

/// Line-oriented "key: value" grammar with '#' comments. Unknown keys,
/// duplicate keys, malformed values, and missing required keys (state, unit)
/// are reported with positions.
ParseResult parse_experiment(std::string_view text);

/// Canonical text form; parses back to an equal spec.
std::string serialize_experiment(const ExperimentSpec& spec);

enum class OutputFormat : std::uint8_t { Csv, Json, Both };

struct RunOptions {
  std::optional<std::uint64_t> seed;   // overrides the file seed
  std::optional<std::string> output;   // overrides the file output base
  OutputFormat format = OutputFormat::Both;
  /// Fit the Poisson-sampled counts instead of the model curve.
  bool fit_sampled = false;
  /// Directory for relative output paths; falls back to HOMSIM_OUT_DIR,
  /// then the working directory.
  std::optional<std::string> out_dir;
};

struct RunResult {
  std::string summary;  // one line: state, kind, headline value, stderr
  std::vector<std::string> files;
  json report;
};

/// Prepare, simulate, fit, and write artifacts. Throws std::invalid_argument
/// for configuration problems and std::runtime_error for runtime or fit
/// failures.
RunResult run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

/// The 16 hyper-entangled Bell combinations with their per-DoF tags and both
/// symmetry classifications.
std::string catalog_table();
json catalog_json();

}  // namespace homsim
