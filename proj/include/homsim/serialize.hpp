#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "homsim/fit.hpp"
#include "homsim/hom.hpp"
#include "homsim/state.hpp"

namespace homsim {

using json = nlohmann::ordered_json;

/// States serialize as lists of nonzero-amplitude records in canonical mode
/// order, amplitudes rounded to 15 significant digits. OAM entries are the
/// signed order +-m.
json to_json(const PolPair& s);
json to_json(const OamPair& s, int m = 1);
json to_json(const HyperPair& s, int m = 1);

json to_json(const SpectralModel& spectral);
json to_json(const HomCurve& curve);
json to_json(const PhaseScan& scan);
json to_json(const HomFit& fit);
json to_json(const PhaseFit& fit);

std::string to_string(DipKind kind);
std::string to_string(BunchingClass cls);

/// CSV with header delay_s,expected,sampled.
std::string to_csv(const HomCurve& curve);

/// CSV with header theta_rad,expected,sampled; expected is the noiseless
/// m_theta and sampled its counts-based estimate (repeated expected when the
/// scan was not sampled).
std::string to_csv(const PhaseScan& scan);

/// Columns of a previously written scan CSV of either flavor.
struct ScanCsv {
  bool is_phase = false;
  std::vector<double> x;
  std::vector<double> expected;
  std::vector<double> sampled;
};

/// Throws std::invalid_argument naming the offending line on malformed input.
ScanCsv read_scan_csv(std::string_view text);

}  // namespace homsim
