#include "homsim/hom.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "homsim/optics.hpp"
#include "homsim/random.hpp"

namespace homsim {

void ScanConfig::validate() const {
  if (!(delay_min < delay_max))
    throw std::invalid_argument("scan window must satisfy delay_min < delay_max");
  if (n_points < 2) throw std::invalid_argument("scan needs at least 2 points");
  if (!(pairs_per_point >= 0.0))
    throw std::invalid_argument("pairs_per_point must be non-negative");
  if (!(accidental_rate >= 0.0))
    throw std::invalid_argument("accidental_rate must be non-negative");
}

ScanConfig ScanConfig::default_for(const SpectralModel& spectral) {
  spectral.validate();
  ScanConfig scan;
  const double half = 3.0 * spectral.coherence_time();
  scan.delay_min = -half;
  scan.delay_max = half;
  return scan;
}

namespace {

struct SpectralGrid {
  std::vector<cxd> f;  // photon 1 amplitude per frequency bin
  std::vector<cxd> g;  // photon 2 amplitude, delayed and floor-leaked
};

// Photon 1 carries the filtered Gaussian amplitude spectrum; photon 2 the
// same spectrum with the delay phase, plus one extra orthogonal bin holding
// the distinguishable fraction of its amplitude.
SpectralGrid make_grid(double tau, const SpectralModel& spectral, int grid_n) {
  const double sigma = spectral.sigma_omega();
  const double omega0 =
      2.0 * std::numbers::pi * 299792458.0 / spectral.center_wavelength;
  const double span = 6.0 * sigma;

  SpectralGrid grid;
  grid.f.resize(grid_n + 1);
  grid.g.resize(grid_n + 1);

  double total = 0.0;
  std::vector<double> amp(grid_n);
  std::vector<double> omega(grid_n);
  for (int k = 0; k < grid_n; ++k) {
    const double x = -span + (2.0 * span) * (k + 0.5) / grid_n;
    amp[k] = std::exp(-x * x / (4.0 * sigma * sigma));
    omega[k] = omega0 + x;
    total += amp[k] * amp[k];
  }
  const double scale = 1.0 / std::sqrt(total);
  const double kept = std::sqrt(1.0 - spectral.distinguishability_floor);
  for (int k = 0; k < grid_n; ++k) {
    const double a = amp[k] * scale;
    grid.f[k] = a;
    grid.g[k] = kept * a * std::exp(cxd(0.0, omega[k] * tau));
  }
  grid.f[grid_n] = 0.0;
  grid.g[grid_n] = std::sqrt(spectral.distinguishability_floor);
  return grid;
}

struct BsCoefficients {
  // c[out][in], out in {Out3, Out4}, in in {In1, In2}
  double c[2][2];
};

BsCoefficients bs_coefficients(BsPhaseConvention conv) {
  constexpr double r = 0.70710678118654752440;
  if (conv == BsPhaseConvention::MinusOnIn2) return {{{r, r}, {r, -r}}};
  return {{{r, r}, {-r, r}}};
}

// Sum over ordered two-photon configurations ((pa, i, k), (pb, j, l)) of the
// symmetrized squared amplitude, for one fixed output-port pair (pa, pb).
// The input-side amplitude is A_ij f_k g_l with photon 1 entering In1 and
// photon 2 entering In2.
double port_block_sum(const Eigen::MatrixXcd& a, const SpectralGrid& grid,
                      const BsCoefficients& bs, int pa, int pb) {
  const int d = static_cast<int>(a.rows());
  const int n = static_cast<int>(grid.f.size());
  double sum = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const cxd direct = a(i, j) * bs.c[pa][0] * bs.c[pb][1];
      const cxd swapped = a(j, i) * bs.c[pb][0] * bs.c[pa][1];
      if (direct == cxd{} && swapped == cxd{}) continue;
      for (int k = 0; k < n; ++k) {
        const cxd u = direct * grid.f[k];
        const cxd v = swapped * grid.g[k];
        for (int l = 0; l < n; ++l)
          sum += std::norm(u * grid.g[l] + v * grid.f[l]);
      }
    }
  }
  return sum;
}

double oracle_coincidence(const Eigen::MatrixXcd& a, double tau,
                          const SpectralModel& spectral, int grid_n,
                          BsPhaseConvention conv) {
  const SpectralGrid grid = make_grid(tau, spectral, grid_n);
  const BsCoefficients bs = bs_coefficients(conv);
  // Ordered (Out3, Out4) configurations enumerate each unordered
  // cross-port pair exactly once.
  return port_block_sum(a, grid, bs, 0, 1);
}

}  // namespace

FockOracleResult full_fock_oracle_matrix(
    const Eigen::Ref<const Eigen::MatrixXcd>& internal_amps, double tau,
    const SpectralModel& spectral, int grid_n, bool check_convergence,
    BsPhaseConvention conv) {
  spectral.validate();
  if (grid_n < 64) throw std::invalid_argument("oracle grid_n must be >= 64");
  if (internal_amps.rows() != internal_amps.cols())
    throw std::invalid_argument("internal amplitude matrix must be square");

  const Eigen::MatrixXcd a = internal_amps;
  FockOracleResult result;
  result.p_coincidence = oracle_coincidence(a, tau, spectral, grid_n, conv);
  if (check_convergence) {
    const double refined = oracle_coincidence(a, tau, spectral, 2 * grid_n, conv);
    result.grid_change = std::abs(refined - result.p_coincidence);
    result.converged = result.grid_change <= 1e-7;
  }
  return result;
}

FockDistribution full_fock_distribution(
    const Eigen::Ref<const Eigen::MatrixXcd>& internal_amps, double tau,
    const SpectralModel& spectral, int grid_n, BsPhaseConvention conv) {
  spectral.validate();
  if (grid_n < 64) throw std::invalid_argument("oracle grid_n must be >= 64");
  const Eigen::MatrixXcd a = internal_amps;
  const SpectralGrid grid = make_grid(tau, spectral, grid_n);
  const BsCoefficients bs = bs_coefficients(conv);

  FockDistribution dist;
  dist.p_coincidence = port_block_sum(a, grid, bs, 0, 1);
  // Ordered same-port sums double-count unordered pairs and quadruple-count
  // the diagonal |2> occupations, which carry half the squared symmetrized
  // amplitude; both reduce to a factor one half.
  dist.p_both_out3 = 0.5 * port_block_sum(a, grid, bs, 0, 0);
  dist.p_both_out4 = 0.5 * port_block_sum(a, grid, bs, 1, 1);
  return dist;
}

// FNV-1a. Folding the state label into the stream seed keeps scans of
// different states statistically independent under a shared seed, the way
// separate acquisitions are in the lab.
std::uint64_t label_salt(std::string_view label) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : label) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

HomCurve simulate_hom_scan_weighted(double symmetry, std::string state_label,
                                    const ScanConfig& scan,
                                    const SpectralModel& spectral) {
  scan.validate();
  spectral.validate();
  if (std::abs(symmetry) > 1.0 + kInputNormTol)
    throw std::invalid_argument("symmetry expectation must lie in [-1, 1]");

  HomCurve curve;
  curve.state_label = std::move(state_label);
  curve.spectral = spectral;
  curve.seed = scan.rng_seed;
  curve.delays.resize(scan.n_points);
  curve.expected.resize(scan.n_points);
  curve.sampled.resize(scan.n_points);

  const std::uint64_t stream_seed = scan.rng_seed ^ label_salt(curve.state_label);
  const double step = (scan.delay_max - scan.delay_min) / (scan.n_points - 1);
  for (int i = 0; i < scan.n_points; ++i) {
    const double tau = scan.delay_min + step * i;
    const double p =
        std::max(0.0, 0.5 * (1.0 - symmetry * temporal_overlap(spectral, tau)));
    curve.delays[i] = tau;
    curve.expected[i] = scan.pairs_per_point * p + scan.accidental_rate;
    RandomStream stream(stream_seed, static_cast<std::uint64_t>(i));
    curve.sampled[i] = stream.poisson(curve.expected[i]);
  }
  return curve;
}

HomCurve simulate_hom_scan(HyperLabel label, const ScanConfig& scan,
                           const SpectralModel& spectral) {
  return simulate_hom_scan(hyper_state(label), to_string(label), scan, spectral);
}

HomCurve simulate_hom_scan(PolBellLabel label, const ScanConfig& scan,
                           const SpectralModel& spectral) {
  return simulate_hom_scan(polarization_bell(label), to_string(label), scan,
                           spectral);
}

HomCurve simulate_hom_scan(OamBellLabel label, const ScanConfig& scan,
                           const SpectralModel& spectral) {
  return simulate_hom_scan(oam_bell(label), to_string(label), scan, spectral);
}

double PhaseScan::measured_m(std::size_t i) const {
  if (!sampled()) return m_theta.at(i);
  const double plus = static_cast<double>(counts_plus.at(i));
  const double minus = static_cast<double>(counts_minus.at(i));
  const double total = plus + minus;
  return total > 0.0 ? (plus - minus) / total : 0.0;
}

namespace {

// Single-photon polarization analyzers used by the protocol readout.
Eigen::Vector2cd analyzer_photon1() {
  return Eigen::Vector2cd(1.0, 1.0) / std::sqrt(2.0);
}

Eigen::Vector2cd analyzer_photon2(double theta, double sign) {
  return Eigen::Vector2cd(1.0, sign * std::exp(cxd(0.0, theta))) / std::sqrt(2.0);
}

// Joint probability of detecting the Out3 photon along bra3 and the Out4
// photon along bra4, OAM unresolved. The two post-selected sectors differ
// by which labeled photon reached which detector; their interference is
// weighted by the zero-delay overlap g0.
double projected_probability(const HyperPair& s34, const HyperPair& s43,
                             const Eigen::Vector2cd& bra3,
                             const Eigen::Vector2cd& bra4, double g0) {
  double p = 0.0;
  for (int oa = 0; oa < 2; ++oa) {
    for (int ob = 0; ob < 2; ++ob) {
      cxd direct = 0.0, exchanged = 0.0;
      for (int p1 = 0; p1 < 2; ++p1) {
        for (int p2 = 0; p2 < 2; ++p2) {
          const cxd w = std::conj(bra3(p1)) * std::conj(bra4(p2));
          direct += w * s34.amplitudes()(2 * p1 + oa, 2 * p2 + ob);
          exchanged += std::conj(bra4(p1)) * std::conj(bra3(p2)) *
                       s43.amplitudes()(2 * p1 + ob, 2 * p2 + oa);
        }
      }
      p += std::norm(direct) + std::norm(exchanged) +
           2.0 * g0 * (std::conj(direct) * exchanged).real();
    }
  }
  return std::max(0.0, p);
}

double eigenphase(double symmetry) {
  if (std::abs(symmetry - 1.0) < kInputNormTol) return 0.0;
  if (std::abs(symmetry + 1.0) < kInputNormTol) return std::numbers::pi;
  throw std::invalid_argument("state is not an exchange eigenstate");
}

}  // namespace

PhaseScan phase_protocol_scan(OamBellLabel label, std::span<const double> thetas,
                              const PhaseNoiseConfig& noise,
                              const SpectralModel& spectral) {
  spectral.validate();
  if (thetas.empty())
    throw std::invalid_argument("phase protocol needs at least one theta");
  if (!(noise.pairs_per_point >= 0.0) || !(noise.accidental_rate >= 0.0))
    throw std::invalid_argument("noise rates must be non-negative");

  const HyperLabel source_label{PolBellLabel::PhiPlus, label};
  const HyperPair source = hyper_state(source_label);

  // The VV component is what the polarizing beam splitter physically
  // exchanges; its own exchange phase is read off the state algebra and
  // compensated together with the two reflection phases.
  const double phi_p =
      eigenphase(symmetry_expectation(PolPair::basis(Polarization::V, Polarization::V)));
  const std::vector<ElementSetting> circuit{
      {ElementKind::Pbs, 0.0, PortLabel::In1},
      {ElementKind::Babinet, -std::numbers::pi - phi_p, PortLabel::Out3},
  };
  const PortPair out = lift_two_photon(compose_circuit(circuit))(
      inject(source, PortLabel::In1, PortLabel::In2));
  const HyperPair s34 = port_sector(out, PortLabel::Out3, PortLabel::Out4);
  const HyperPair s43 = port_sector(out, PortLabel::Out4, PortLabel::Out3);

  const double g0 = temporal_overlap(spectral, 0.0);
  const Eigen::Vector2cd bra3 = analyzer_photon1();

  PhaseScan scan;
  scan.state_label = to_string(label);
  scan.seed = noise.rng_seed;
  scan.phi_p = phi_p;
  scan.phi_o = eigenphase(symmetry_expectation(oam_bell(label)));
  scan.thetas.assign(thetas.begin(), thetas.end());

  const bool sample = noise.pairs_per_point > 0.0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const double theta = thetas[i];
    const double p_plus = projected_probability(
        s34, s43, bra3, analyzer_photon2(theta, +1.0), g0);
    const double p_minus = projected_probability(
        s34, s43, bra3, analyzer_photon2(theta, -1.0), g0);
    const double total = p_plus + p_minus;
    scan.p_plus.push_back(p_plus);
    scan.p_minus.push_back(p_minus);
    scan.m_theta.push_back(total > 0.0 ? (p_plus - p_minus) / total : 0.0);
    if (sample) {
      RandomStream stream(noise.rng_seed, static_cast<std::uint64_t>(i));
      scan.counts_plus.push_back(
          stream.poisson(noise.pairs_per_point * p_plus + noise.accidental_rate));
      scan.counts_minus.push_back(
          stream.poisson(noise.pairs_per_point * p_minus + noise.accidental_rate));
    }
  }
  return scan;
}

double hwp_angle_for_theta(double theta) {
  return 3.0 * std::numbers::pi / 8.0 + theta / 4.0;
}

std::vector<double> theta_grid(int n) {
  if (n < 2) throw std::invalid_argument("theta grid needs at least 2 points");
  std::vector<double> thetas(n);
  for (int i = 0; i < n; ++i)
    thetas[i] = 2.0 * std::numbers::pi * i / static_cast<double>(n);
  return thetas;
}

}  // namespace homsim
