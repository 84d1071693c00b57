#include "homsim/serialize.hpp"

#include <cstdio>
#include <cstdlib>

namespace homsim {

namespace {

double round_sig15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return std::strtod(buf, nullptr);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int signed_oam(OamSign s, int m) { return s == OamSign::Plus ? m : -m; }

void put_amplitude(json& record, cxd amp) {
  record["re"] = round_sig15(amp.real());
  record["im"] = round_sig15(amp.imag());
}

}  // namespace

json to_json(const PolPair& s) {
  json records = json::array();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const cxd amp = s.amplitudes()(i, j);
      if (amp == cxd{}) continue;
      json r;
      r["pol1"] = ModeSpace<Polarization>::name(ModeSpace<Polarization>::from_index(i));
      r["pol2"] = ModeSpace<Polarization>::name(ModeSpace<Polarization>::from_index(j));
      put_amplitude(r, amp);
      records.push_back(std::move(r));
    }
  }
  return records;
}

json to_json(const OamPair& s, int m) {
  validate_oam_order(m);
  json records = json::array();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const cxd amp = s.amplitudes()(i, j);
      if (amp == cxd{}) continue;
      json r;
      r["oam1"] = signed_oam(ModeSpace<OamSign>::from_index(i), m);
      r["oam2"] = signed_oam(ModeSpace<OamSign>::from_index(j), m);
      put_amplitude(r, amp);
      records.push_back(std::move(r));
    }
  }
  return records;
}

json to_json(const HyperPair& s, int m) {
  validate_oam_order(m);
  json records = json::array();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const cxd amp = s.amplitudes()(i, j);
      if (amp == cxd{}) continue;
      const InternalMode m1 = ModeSpace<InternalMode>::from_index(i);
      const InternalMode m2 = ModeSpace<InternalMode>::from_index(j);
      json r;
      r["pol1"] = ModeSpace<Polarization>::name(m1.pol);
      r["oam1"] = signed_oam(m1.oam, m);
      r["pol2"] = ModeSpace<Polarization>::name(m2.pol);
      r["oam2"] = signed_oam(m2.oam, m);
      put_amplitude(r, amp);
      records.push_back(std::move(r));
    }
  }
  return records;
}

json to_json(const SpectralModel& spectral) {
  return json{{"center_wavelength_m", spectral.center_wavelength},
              {"filter_fwhm_m", spectral.filter_fwhm},
              {"distinguishability_floor", spectral.distinguishability_floor},
              {"coherence_time_s", spectral.coherence_time()}};
}

json to_json(const HomCurve& curve) {
  return json{{"kind", "hom_scan"},
              {"state", curve.state_label},
              {"seed", curve.seed},
              {"spectral", to_json(curve.spectral)},
              {"delay_s", curve.delays},
              {"expected", curve.expected},
              {"sampled", curve.sampled}};
}

json to_json(const PhaseScan& scan) {
  json j{{"kind", "phase_scan"},
         {"state", scan.state_label},
         {"seed", scan.seed},
         {"phi_p", scan.phi_p},
         {"phi_o", scan.phi_o},
         {"theta_rad", scan.thetas},
         {"p_plus", scan.p_plus},
         {"p_minus", scan.p_minus},
         {"m_theta", scan.m_theta}};
  if (scan.sampled()) {
    j["counts_plus"] = scan.counts_plus;
    j["counts_minus"] = scan.counts_minus;
  }
  return j;
}

std::string to_string(DipKind kind) {
  return kind == DipKind::Dip ? "dip" : "peak";
}

std::string to_string(BunchingClass cls) {
  return cls == BunchingClass::Bunching ? "bunching" : "anti-bunching";
}

json to_json(const HomFit& fit) {
  return json{{"kind", to_string(fit.kind)},
              {"visibility", fit.visibility},
              {"visibility_stderr", fit.visibility_stderr},
              {"c0", fit.c0},
              {"c_inf", fit.c_inf},
              {"center_s", fit.center},
              {"width_s", fit.width},
              {"residual_rms", fit.residual_rms},
              {"reliable", fit.reliable}};
}

json to_json(const PhaseFit& fit) {
  return json{{"phi_rad", fit.phi},
              {"phi_stderr_rad", fit.phi_stderr},
              {"amplitude", fit.amplitude},
              {"offset", fit.offset},
              {"residual_rms", fit.residual_rms},
              {"reliable", fit.reliable}};
}

std::string to_csv(const HomCurve& curve) {
  std::string out = "delay_s,expected,sampled\n";
  for (std::size_t i = 0; i < curve.delays.size(); ++i) {
    out += format_double(curve.delays[i]);
    out += ',';
    out += format_double(curve.expected[i]);
    out += ',';
    out += std::to_string(curve.sampled[i]);
    out += '\n';
  }
  return out;
}

std::string to_csv(const PhaseScan& scan) {
  std::string out = "theta_rad,expected,sampled\n";
  for (std::size_t i = 0; i < scan.thetas.size(); ++i) {
    out += format_double(scan.thetas[i]);
    out += ',';
    out += format_double(scan.m_theta[i]);
    out += ',';
    out += format_double(scan.measured_m(i));
    out += '\n';
  }
  return out;
}

ScanCsv read_scan_csv(std::string_view text) {
  ScanCsv csv;
  int line_no = 0;
  std::size_t pos = 0;
  bool saw_header = false;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (line.empty()) continue;

    if (!saw_header) {
      if (line == "delay_s,expected,sampled") csv.is_phase = false;
      else if (line == "theta_rad,expected,sampled") csv.is_phase = true;
      else
        throw std::invalid_argument("line 1: unrecognized scan CSV header");
      saw_header = true;
      continue;
    }

    double values[3];
    std::size_t field_start = 0;
    for (int f = 0; f < 3; ++f) {
      const std::size_t comma = line.find(',', field_start);
      const bool last = f == 2;
      if (last != (comma == std::string_view::npos))
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": expected 3 comma-separated fields");
      const std::string field(line.substr(
          field_start, last ? line.size() - field_start : comma - field_start));
      char* end = nullptr;
      values[f] = std::strtod(field.c_str(), &end);
      if (field.empty() || end != field.c_str() + field.size())
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": malformed number '" + field + "'");
      field_start = comma + 1;
    }
    csv.x.push_back(values[0]);
    csv.expected.push_back(values[1]);
    csv.sampled.push_back(values[2]);
  }
  if (!saw_header) throw std::invalid_argument("line 1: empty scan CSV");
  return csv;
}

}  // namespace homsim
