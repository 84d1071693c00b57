// Command-line front end: state catalog, delay scans, exchange-phase scans,
// and re-fitting of previously written scan CSVs.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "homsim/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitRuntime = 2;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void print_diagnostics(const std::string& path,
                       const std::vector<homsim::ParseDiagnostic>& diagnostics) {
  for (const auto& d : diagnostics) {
    const char* severity =
        d.severity == homsim::ParseDiagnostic::Severity::Error ? "error"
                                                                : "warning";
    std::cerr << path << ":" << d.line << ":" << d.column << ": " << severity
              << ": " << d.message << "\n";
  }
}

struct ScanArgs {
  std::string spec_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::string format = "both";
  std::string column = "expected";
};

void add_scan_options(CLI::App& cmd, ScanArgs& args) {
  cmd.add_option("spec", args.spec_path, "experiment file")->required();
  cmd.add_option("--seed", args.seed, "override the file seed");
  cmd.add_option("--out", args.out, "override the output base path");
  cmd.add_option("--format", args.format, "artifacts to write")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  cmd.add_option("--column", args.column, "series handed to the fit")
      ->check(CLI::IsMember({"expected", "sampled"}));
}

homsim::OutputFormat parse_format(const std::string& f) {
  if (f == "csv") return homsim::OutputFormat::Csv;
  if (f == "json") return homsim::OutputFormat::Json;
  return homsim::OutputFormat::Both;
}

int run_scan(const ScanArgs& args, homsim::InterferenceUnit expected_unit) {
  const auto text = read_file(args.spec_path);
  if (!text) {
    std::cerr << "error: cannot open '" << args.spec_path << "'\n";
    return kExitParse;
  }
  const homsim::ParseResult parsed = homsim::parse_experiment(*text);
  print_diagnostics(args.spec_path, parsed.diagnostics);
  if (!parsed.ok()) return kExitParse;

  if (parsed.spec->unit != expected_unit) {
    const bool wants_bs = expected_unit == homsim::InterferenceUnit::Bs;
    std::cerr << "error: spec declares unit '" << (wants_bs ? "pbs" : "bs")
              << "'; use the '" << (wants_bs ? "phase-scan" : "simulate")
              << "' subcommand\n";
    return kExitParse;
  }

  homsim::RunOptions options;
  options.seed = args.seed;
  options.output = args.out;
  options.format = parse_format(args.format);
  options.fit_sampled = args.column == "sampled";

  const homsim::RunResult result = homsim::run_experiment(*parsed.spec, options);
  std::cout << result.summary << "\n";
  for (const std::string& f : result.files) std::cout << "wrote " << f << "\n";
  return kExitOk;
}

int write_or_print(const std::optional<std::string>& out, const std::string& text) {
  if (!out) {
    std::cout << text;
    return kExitOk;
  }
  std::ofstream file(*out, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot write '" << *out << "'\n";
    return kExitRuntime;
  }
  file << text;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-photon interference simulator for hyper-entangled Bell states"};
  app.require_subcommand(1);

  CLI::App* catalog = app.add_subcommand(
      "catalog", "print the 16 hyper states with both symmetry classifications");
  std::string catalog_format = "text";
  std::optional<std::string> catalog_out;
  std::optional<std::uint64_t> unused_seed;
  catalog->add_option("--format", catalog_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  catalog->add_option("--out", catalog_out, "write to a file instead of stdout");
  catalog->add_option("--seed", unused_seed, "accepted for uniformity; unused");

  ScanArgs simulate_args;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "run a beam-splitter delay scan from an experiment file");
  add_scan_options(*simulate, simulate_args);

  ScanArgs phase_args;
  CLI::App* phase = app.add_subcommand(
      "phase-scan", "run the exchange-phase protocol from an experiment file");
  add_scan_options(*phase, phase_args);

  CLI::App* fit = app.add_subcommand("fit", "fit a previously written scan CSV");
  std::string fit_path;
  std::string fit_column = "sampled";
  std::string fit_format = "json";
  std::optional<std::string> fit_out;
  fit->add_option("csv", fit_path, "scan CSV written by simulate/phase-scan")
      ->required();
  fit->add_option("--column", fit_column, "series to fit")
      ->check(CLI::IsMember({"expected", "sampled"}));
  fit->add_option("--format", fit_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
  fit->add_option("--out", fit_out, "write to a file instead of stdout");
  fit->add_option("--seed", unused_seed, "accepted for uniformity; unused");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitParse;
  }

  try {
    if (catalog->parsed()) {
      const std::string text = catalog_format == "json"
                                   ? homsim::catalog_json().dump(2) + "\n"
                                   : homsim::catalog_table();
      return write_or_print(catalog_out, text);
    }
    if (simulate->parsed())
      return run_scan(simulate_args, homsim::InterferenceUnit::Bs);
    if (phase->parsed())
      return run_scan(phase_args, homsim::InterferenceUnit::Pbs);

    // fit
    const auto text = read_file(fit_path);
    if (!text) {
      std::cerr << "error: cannot open '" << fit_path << "'\n";
      return kExitParse;
    }
    homsim::ScanCsv csv;
    try {
      csv = homsim::read_scan_csv(*text);
    } catch (const std::invalid_argument& e) {
      std::cerr << fit_path << ": error: " << e.what() << "\n";
      return kExitParse;
    }
    const auto& series = fit_column == "sampled" ? csv.sampled : csv.expected;
    homsim::json fit_json;
    std::string summary;
    if (csv.is_phase) {
      const homsim::PhaseFit f = homsim::fit_phase(csv.x, series);
      fit_json = homsim::to_json(f);
      summary = "Phi=" + std::to_string(f.phi) + " rad +/- " +
                std::to_string(f.phi_stderr) + "\n";
    } else {
      const homsim::HomFit f = homsim::fit_hom(csv.x, series);
      fit_json = homsim::to_json(f);
      summary = "kind=" + homsim::to_string(f.kind) +
                " V=" + std::to_string(f.visibility) + " +/- " +
                std::to_string(f.visibility_stderr) + "\n";
    }
    return write_or_print(fit_out,
                          fit_format == "json" ? fit_json.dump(2) + "\n" : summary);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
