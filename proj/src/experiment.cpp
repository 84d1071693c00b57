#include "homsim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>

namespace homsim {

std::string SourceState::label() const {
  return std::visit([](auto l) { return to_string(l); }, value);
}

bool operator==(const SourceState& a, const SourceState& b) {
  if (a.value.index() != b.value.index()) return false;
  if (const auto* h = std::get_if<HyperLabel>(&a.value))
    return *h == std::get<HyperLabel>(b.value);
  if (const auto* p = std::get_if<PolBellLabel>(&a.value))
    return *p == std::get<PolBellLabel>(b.value);
  return std::get<OamBellLabel>(a.value) == std::get<OamBellLabel>(b.value);
}

ScanConfig ExperimentSpec::scan_config() const {
  ScanConfig scan = ScanConfig::default_for(spectral);
  if (delay_range) {
    scan.delay_min = delay_range->first;
    scan.delay_max = delay_range->second;
  }
  scan.n_points = points;
  scan.pairs_per_point = pairs_per_point;
  scan.accidental_rate = accidental_rate;
  scan.rng_seed = seed;
  return scan;
}

bool operator==(const ExperimentSpec& a, const ExperimentSpec& b) {
  return a.source == b.source && a.unit == b.unit &&
         a.spectral.center_wavelength == b.spectral.center_wavelength &&
         a.spectral.filter_fwhm == b.spectral.filter_fwhm &&
         a.spectral.distinguishability_floor == b.spectral.distinguishability_floor &&
         a.delay_range == b.delay_range && a.points == b.points &&
         a.pairs_per_point == b.pairs_per_point &&
         a.accidental_rate == b.accidental_rate && a.seed == b.seed &&
         a.theta_points == b.theta_points && a.output == b.output &&
         a.prep_overrides == b.prep_overrides;
}

namespace {

struct KeyValue {
  int line;
  int key_column;
  int value_column;
  std::string value;
};

struct LineScanner {
  std::string_view text;
  std::size_t pos = 0;
  int line_no = 0;

  bool next(std::string_view& line) {
    if (pos > text.size()) return false;
    const std::size_t eol = text.find('\n', pos);
    line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                          : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    return true;
  }
};

constexpr const char* kKnownKeys[] = {
    "state",          "unit",      "filter_fwhm_nm", "center_wavelength_nm",
    "delay_range_ps", "points",    "pairs_per_point", "accidentals",
    "floor",          "seed",      "theta_points",    "output",
};

bool known_key(std::string_view key) {
  return std::find(std::begin(kKnownKeys), std::end(kKnownKeys), key) !=
         std::end(kKnownKeys);
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ParseResult run() {
    collect();
    if (!has_errors()) build();
    ParseResult result;
    result.diagnostics = std::move(diagnostics_);
    if (!has_errors(result.diagnostics)) result.spec = std::move(spec_);
    return result;
  }

 private:
  static bool has_errors(const std::vector<ParseDiagnostic>& ds) {
    return std::any_of(ds.begin(), ds.end(), [](const ParseDiagnostic& d) {
      return d.severity == ParseDiagnostic::Severity::Error;
    });
  }
  bool has_errors() const { return has_errors(diagnostics_); }

  void error(int line, int column, std::string message) {
    diagnostics_.push_back(
        {line, column, ParseDiagnostic::Severity::Error, std::move(message)});
  }
  void warning(int line, int column, std::string message) {
    diagnostics_.push_back(
        {line, column, ParseDiagnostic::Severity::Warning, std::move(message)});
  }

  void collect() {
    LineScanner scanner{text_};
    std::string_view raw;
    while (scanner.next(raw)) {
      std::string_view line = raw;
      const std::size_t hash = line.find('#');
      if (hash != std::string_view::npos) line = line.substr(0, hash);

      std::size_t start = line.find_first_not_of(" \t");
      if (start == std::string_view::npos) continue;
      std::size_t end = line.find_last_not_of(" \t");
      const std::string_view content = line.substr(start, end - start + 1);

      const std::size_t colon = content.find(':');
      if (colon == std::string_view::npos) {
        error(scanner.line_no, static_cast<int>(start) + 1,
              "expected 'key: value'");
        continue;
      }
      std::string_view key = content.substr(0, colon);
      while (!key.empty() && (key.back() == ' ' || key.back() == '\t'))
        key.remove_suffix(1);
      if (key.empty()) {
        error(scanner.line_no, static_cast<int>(start) + 1, "empty key");
        continue;
      }
      if (!known_key(key)) {
        error(scanner.line_no, static_cast<int>(start) + 1,
              "unknown key '" + std::string(key) + "'");
        continue;
      }

      std::size_t value_offset = start + colon + 1;
      std::string_view value = content.substr(colon + 1);
      while (!value.empty() && (value.front() == ' ' || value.front() == '\t')) {
        value.remove_prefix(1);
        ++value_offset;
      }

      if (entries_.count(std::string(key))) {
        error(scanner.line_no, static_cast<int>(start) + 1,
              "duplicate key '" + std::string(key) + "'");
        continue;
      }
      entries_.emplace(std::string(key),
                       KeyValue{scanner.line_no, static_cast<int>(start) + 1,
                                static_cast<int>(value_offset) + 1,
                                std::string(value)});
    }
  }

  const KeyValue* find(const char* key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::optional<double> parse_double(const KeyValue& kv, const char* key) {
    char* end = nullptr;
    const double v = std::strtod(kv.value.c_str(), &end);
    if (kv.value.empty() || end != kv.value.c_str() + kv.value.size()) {
      error(kv.line, kv.value_column,
            std::string("value of '") + key + "' is not a number");
      return std::nullopt;
    }
    return v;
  }

  std::optional<long long> parse_int(const KeyValue& kv, const char* key) {
    char* end = nullptr;
    const long long v = std::strtoll(kv.value.c_str(), &end, 10);
    if (kv.value.empty() || end != kv.value.c_str() + kv.value.size()) {
      error(kv.line, kv.value_column,
            std::string("value of '") + key + "' is not an integer");
      return std::nullopt;
    }
    return v;
  }

  void build() {
    const KeyValue* state = find("state");
    const KeyValue* unit = find("unit");
    if (!state) error(1, 1, "missing required key 'state'");
    if (!unit) error(1, 1, "missing required key 'unit'");
    if (has_errors()) return;

    if (const auto hyper = parse_hyper_label(state->value)) {
      spec_.source.value = *hyper;
    } else if (const auto pol = parse_pol_label(state->value)) {
      spec_.source.value = *pol;
    } else if (const auto oam = parse_oam_label(state->value)) {
      spec_.source.value = *oam;
    } else {
      error(state->line, state->value_column,
            "unknown state label '" + state->value + "'");
    }

    if (unit->value == "bs") {
      spec_.unit = InterferenceUnit::Bs;
    } else if (unit->value == "pbs") {
      spec_.unit = InterferenceUnit::Pbs;
    } else {
      error(unit->line, unit->value_column,
            "unit must be 'bs' or 'pbs', got '" + unit->value + "'");
    }
    if (has_errors()) return;

    if (spec_.unit == InterferenceUnit::Pbs && !spec_.source.is_oam())
      error(state->line, state->value_column,
            "the pbs unit measures exchange phases of a pure OAM Bell label; "
            "got '" + state->value + "'");

    if (const KeyValue* kv = find("filter_fwhm_nm")) {
      if (const auto v = parse_double(*kv, "filter_fwhm_nm")) {
        if (*v > 0.0) spec_.spectral.filter_fwhm = *v * 1e-9;
        else error(kv->line, kv->value_column, "filter_fwhm_nm must be positive");
      }
    }
    if (const KeyValue* kv = find("center_wavelength_nm")) {
      if (const auto v = parse_double(*kv, "center_wavelength_nm")) {
        if (*v > 0.0) spec_.spectral.center_wavelength = *v * 1e-9;
        else
          error(kv->line, kv->value_column, "center_wavelength_nm must be positive");
      }
    }
    if (const KeyValue* kv = find("floor")) {
      if (const auto v = parse_double(*kv, "floor")) {
        if (*v >= 0.0 && *v <= 1.0) spec_.spectral.distinguishability_floor = *v;
        else error(kv->line, kv->value_column, "floor must lie in [0, 1]");
      }
    }
    if (const KeyValue* kv = find("delay_range_ps")) {
      const std::size_t space = kv->value.find(' ');
      bool bad = false;
      double lo = 0.0, hi = 0.0;
      auto number = [&](const std::string& s) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (s.empty() || end != s.c_str() + s.size()) bad = true;
        return v;
      };
      if (space == std::string::npos) {
        hi = number(kv->value);
        lo = -hi;
        if (!bad && !(hi > 0.0)) bad = true;
      } else {
        lo = number(kv->value.substr(0, space));
        std::string rest = kv->value.substr(space + 1);
        while (!rest.empty() && rest.front() == ' ') rest.erase(rest.begin());
        hi = number(rest);
        if (!bad && !(lo < hi)) bad = true;
      }
      if (bad)
        error(kv->line, kv->value_column,
              "delay_range_ps takes 'half_width' or 'min max' with min < max");
      else
        spec_.delay_range = std::make_pair(lo * 1e-12, hi * 1e-12);
    }
    if (const KeyValue* kv = find("points")) {
      if (const auto v = parse_int(*kv, "points")) {
        if (*v >= 2 && *v <= 1000000) spec_.points = static_cast<int>(*v);
        else error(kv->line, kv->value_column, "points must be >= 2");
      }
    }
    if (const KeyValue* kv = find("pairs_per_point")) {
      if (const auto v = parse_double(*kv, "pairs_per_point")) {
        if (*v >= 0.0) spec_.pairs_per_point = *v;
        else
          error(kv->line, kv->value_column, "pairs_per_point must be non-negative");
      }
    }
    if (const KeyValue* kv = find("accidentals")) {
      if (const auto v = parse_double(*kv, "accidentals")) {
        if (*v >= 0.0) spec_.accidental_rate = *v;
        else error(kv->line, kv->value_column, "accidentals must be non-negative");
      }
    }
    if (const KeyValue* kv = find("seed")) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(kv->value.c_str(), &end, 10);
      if (kv->value.empty() || end != kv->value.c_str() + kv->value.size() ||
          kv->value.front() == '-')
        error(kv->line, kv->value_column, "seed must be a non-negative integer");
      else
        spec_.seed = v;
    }
    if (const KeyValue* kv = find("theta_points")) {
      if (const auto v = parse_int(*kv, "theta_points")) {
        if (*v >= 2 && *v <= 1000000) spec_.theta_points = static_cast<int>(*v);
        else error(kv->line, kv->value_column, "theta_points must be >= 2");
      }
      if (spec_.unit == InterferenceUnit::Bs)
        warning(kv->line, kv->key_column, "theta_points is unused by the bs unit");
    }
    if (const KeyValue* kv = find("output")) {
      if (kv->value.empty())
        error(kv->line, kv->value_column, "output path must not be empty");
      else
        spec_.output = kv->value;
    }
    if (spec_.unit == InterferenceUnit::Pbs) {
      for (const char* key : {"delay_range_ps", "points"})
        if (const KeyValue* kv = find(key))
          warning(kv->line, kv->key_column,
                  std::string("'") + key + "' is unused by the pbs unit");
    }
  }

  std::string_view text_;
  std::map<std::string, KeyValue> entries_;
  std::vector<ParseDiagnostic> diagnostics_;
  ExperimentSpec spec_;
};

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Text for a scaled key. The parser computes value * mult, which need not
// invert value_si / mult bit for bit, so probe nearby representations and
// emit one that reparses to exactly value_si when such a preimage exists.
std::string format_quantity(double value_si, double mult) {
  const double v0 = value_si / mult;
  double lo = v0;
  double hi = v0;
  for (int step = 0; step < 4; ++step) {
    if (lo * mult == value_si) return format_number(lo);
    if (hi * mult == value_si) return format_number(hi);
    lo = std::nextafter(lo, -std::numeric_limits<double>::infinity());
    hi = std::nextafter(hi, std::numeric_limits<double>::infinity());
  }
  return format_number(v0);
}

}  // namespace

ParseResult parse_experiment(std::string_view text) { return Parser(text).run(); }

std::string serialize_experiment(const ExperimentSpec& spec) {
  std::string out;
  out += "state: " + spec.source.label() + "\n";
  out += std::string("unit: ") +
         (spec.unit == InterferenceUnit::Bs ? "bs" : "pbs") + "\n";
  out += "filter_fwhm_nm: " + format_quantity(spec.spectral.filter_fwhm, 1e-9) + "\n";
  out += "center_wavelength_nm: " +
         format_quantity(spec.spectral.center_wavelength, 1e-9) + "\n";
  if (spec.delay_range)
    out += "delay_range_ps: " + format_quantity(spec.delay_range->first, 1e-12) +
           " " + format_quantity(spec.delay_range->second, 1e-12) + "\n";
  out += "points: " + std::to_string(spec.points) + "\n";
  out += "pairs_per_point: " + format_number(spec.pairs_per_point) + "\n";
  out += "accidentals: " + format_number(spec.accidental_rate) + "\n";
  out += "floor: " + format_number(spec.spectral.distinguishability_floor) + "\n";
  out += "seed: " + std::to_string(spec.seed) + "\n";
  out += "theta_points: " + std::to_string(spec.theta_points) + "\n";
  if (!spec.output.empty()) out += "output: " + spec.output + "\n";
  return out;
}

namespace {

std::string sanitized(std::string label) {
  std::erase(label, ' ');
  return label;
}

std::filesystem::path resolve_output(const ExperimentSpec& spec,
                                     const RunOptions& options,
                                     const std::string& default_stem) {
  std::filesystem::path base = options.output.value_or(
      spec.output.empty() ? default_stem : spec.output);
  if (base.is_absolute()) return base;

  std::string dir;
  if (options.out_dir) {
    dir = *options.out_dir;
  } else if (const char* env = std::getenv("HOMSIM_OUT_DIR")) {
    dir = env;
  }
  return dir.empty() ? base : std::filesystem::path(dir) / base;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << bytes;
}

std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

RunResult run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  spec.spectral.validate();
  ExperimentSpec effective = spec;
  if (options.seed) effective.seed = *options.seed;

  RunResult result;
  json report;
  report["spec"] = serialize_experiment(effective);
  std::string csv;

  if (effective.unit == InterferenceUnit::Bs) {
    HyperPair state = hyper_state(PolBellLabel::PhiPlus, OamBellLabel::NuPlus);
    double weight = 0.0;
    std::vector<ElementSetting> prep;
    if (effective.source.is_hyper()) {
      const HyperLabel target = std::get<HyperLabel>(effective.source.value);
      prep = effective.prep_overrides.empty() ? prepare_hyper(target)
                                              : effective.prep_overrides;
      state = apply_preparation(state, prep);
      weight = symmetry_expectation(state);
      json prep_json = json::array();
      for (const ElementSetting& e : prep) prep_json.push_back(to_text(e));
      report["preparation"] = std::move(prep_json);
      report["source_state"] = to_json(state);
    } else if (effective.source.is_oam()) {
      weight = symmetry_expectation(
          oam_bell(std::get<OamBellLabel>(effective.source.value)));
    } else {
      weight = symmetry_expectation(
          polarization_bell(std::get<PolBellLabel>(effective.source.value)));
    }

    const HomCurve curve = simulate_hom_scan_weighted(
        weight, effective.source.label(), effective.scan_config(),
        effective.spectral);
    const HomFit fit = fit_hom(curve, options.fit_sampled);

    csv = to_csv(curve);
    report["curve"] = to_json(curve);
    report["fit"] = to_json(fit);

    result.summary = effective.source.label() + "  unit=bs  kind=" +
                     to_string(fit.kind) + "  V=" +
                     format_fixed(fit.visibility, 3) + " +/- " +
                     format_fixed(fit.visibility_stderr, 3);
  } else {
    const OamBellLabel label = std::get<OamBellLabel>(effective.source.value);
    const PhaseNoiseConfig noise{effective.pairs_per_point,
                                 effective.accidental_rate, effective.seed};
    const PhaseScan scan = phase_protocol_scan(
        label, theta_grid(effective.theta_points), noise, effective.spectral);
    const PhaseFit fit = fit_phase(scan, options.fit_sampled);

    csv = to_csv(scan);
    report["scan"] = to_json(scan);
    report["fit"] = to_json(fit);

    result.summary = scan.state_label + "  unit=pbs  Phi=" +
                     format_fixed(fit.phi, 4) + " rad +/- " +
                     format_fixed(fit.phi_stderr, 4);
  }

  const std::filesystem::path base = resolve_output(
      effective, options,
      sanitized(effective.source.label()) +
          (effective.unit == InterferenceUnit::Bs ? "_bs" : "_pbs"));
  if (options.format != OutputFormat::Json) {
    std::filesystem::path p = base;
    p += ".csv";
    write_file(p, csv);
    result.files.push_back(p.string());
  }
  if (options.format != OutputFormat::Csv) {
    std::filesystem::path p = base;
    p += ".json";
    write_file(p, report.dump(2) + "\n");
    result.files.push_back(p.string());
  }
  result.report = std::move(report);
  return result;
}

namespace {

std::string class_name(SymmetryClass c) {
  switch (c.kind) {
    case SymmetryClass::Kind::Symmetric: return "symmetric";
    case SymmetryClass::Kind::Antisymmetric: return "antisymmetric";
    case SymmetryClass::Kind::Mixed: return "mixed";
  }
  return "?";
}

std::string tag_name(ExchangeTag t) {
  return t == ExchangeTag::Boson ? "Boson" : "Fermion";
}

}  // namespace

std::string catalog_table() {
  std::string out =
      "state         pol tag  oam tag  parity rule    swap operator\n";
  int symmetric = 0, antisymmetric = 0;
  for (const HyperLabel label : all_hyper_labels()) {
    const SymmetryClass by_rule = parity_rule(label);
    const SymmetryClass by_swap = classify_exchange(hyper_state(label));
    if (by_swap.kind == SymmetryClass::Kind::Symmetric) ++symmetric;
    if (by_swap.kind == SymmetryClass::Kind::Antisymmetric) ++antisymmetric;

    char row[128];
    std::snprintf(row, sizeof(row), "%-13s %-8s %-8s %-14s %-14s%s\n",
                  to_string(label).c_str(), tag_name(tag_of(label.pol)).c_str(),
                  tag_name(tag_of(label.oam)).c_str(),
                  class_name(by_rule).c_str(), class_name(by_swap).c_str(),
                  by_rule == by_swap ? "" : "  MISMATCH");
    out += row;
  }
  out += std::to_string(symmetric) + " symmetric, " +
         std::to_string(antisymmetric) + " antisymmetric\n";
  return out;
}

json catalog_json() {
  json rows = json::array();
  for (const HyperLabel label : all_hyper_labels()) {
    const SymmetryClass by_rule = parity_rule(label);
    const SymmetryClass by_swap = classify_exchange(hyper_state(label));
    rows.push_back(json{{"state", to_string(label)},
                        {"pol_tag", tag_name(tag_of(label.pol))},
                        {"oam_tag", tag_name(tag_of(label.oam))},
                        {"parity_rule", class_name(by_rule)},
                        {"swap_operator", class_name(by_swap)},
                        {"agree", by_rule == by_swap}});
  }
  return rows;
}

}  // namespace homsim
