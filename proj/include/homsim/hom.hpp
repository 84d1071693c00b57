#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "homsim/bell.hpp"
#include "homsim/spectral.hpp"
#include "homsim/state.hpp"

namespace homsim {

struct ScanConfig {
  double delay_min = 0.0;  // s
  double delay_max = 0.0;  // s
  int n_points = 41;
  double pairs_per_point = 2000.0;  // generated pairs per delay setting
  double accidental_rate = 0.0;     // extra counts per point, delay-independent
  std::uint64_t rng_seed = 1;

  void validate() const;

  /// Symmetric window of +-3 coherence times, 41 points.
  static ScanConfig default_for(const SpectralModel& spectral);
};

struct HomCurve {
  std::vector<double> delays;          // s
  std::vector<double> expected;        // model counts per point
  std::vector<std::uint64_t> sampled;  // Poisson draws of expected
  std::string state_label;
  SpectralModel spectral;
  std::uint64_t seed = 0;
};

/// Coincidence probability between the two output arms of the balanced
/// beam splitter at pair delay tau. Factorizes into the exchange
/// expectation of the internal state and the temporal overlap.
template <ModeKind M>
double coincidence_probability(const TwoPhotonState<M>& state, double tau,
                               const SpectralModel& spectral) {
  return 0.5 * (1.0 - symmetry_expectation(state) * temporal_overlap(spectral, tau));
}

enum class BsPhaseConvention : std::uint8_t { MinusOnIn2, MinusOnIn1 };

struct FockOracleResult {
  double p_coincidence = 0.0;
  bool converged = true;     // doubling the grid moved the value <= 1e-7
  double grid_change = 0.0;  // |value(2n) - value(n)| when checked
};

/// Full output distribution of the oracle at one delay; sums to 1.
struct FockDistribution {
  double p_coincidence = 0.0;
  double p_both_out3 = 0.0;
  double p_both_out4 = 0.0;
  double total() const { return p_coincidence + p_both_out3 + p_both_out4; }
};

/// Independent check of coincidence_probability: discretizes the photon
/// spectrum on a frequency grid, applies the beam splitter with the delay
/// phase in second quantization, symmetrizes, and sums probabilities over
/// one-photon-per-output configurations. No shared code with the
/// factorized path.
FockOracleResult full_fock_oracle_matrix(
    const Eigen::Ref<const Eigen::MatrixXcd>& internal_amps, double tau,
    const SpectralModel& spectral, int grid_n, bool check_convergence = true,
    BsPhaseConvention conv = BsPhaseConvention::MinusOnIn2);

template <ModeKind M>
FockOracleResult full_fock_oracle(const TwoPhotonState<M>& state, double tau,
                                  const SpectralModel& spectral, int grid_n,
                                  bool check_convergence = true,
                                  BsPhaseConvention conv = BsPhaseConvention::MinusOnIn2) {
  if (!state.is_normalized())
    throw std::invalid_argument("full_fock_oracle requires a normalized state");
  return full_fock_oracle_matrix(Eigen::MatrixXcd(state.amplitudes()), tau,
                                 spectral, grid_n, check_convergence, conv);
}

FockDistribution full_fock_distribution(
    const Eigen::Ref<const Eigen::MatrixXcd>& internal_amps, double tau,
    const SpectralModel& spectral, int grid_n,
    BsPhaseConvention conv = BsPhaseConvention::MinusOnIn2);

/// Delay scan through the beam-splitter unit. Expected counts are
/// pairs_per_point * P_cc + accidental_rate; sampled counts are Poisson
/// draws from one independent stream per point, derived from the seed and
/// the state label so distinct states sample independently.
HomCurve simulate_hom_scan_weighted(double symmetry, std::string state_label,
                                    const ScanConfig& scan,
                                    const SpectralModel& spectral);

template <ModeKind M>
HomCurve simulate_hom_scan(const TwoPhotonState<M>& state,
                           std::string state_label, const ScanConfig& scan,
                           const SpectralModel& spectral) {
  return simulate_hom_scan_weighted(symmetry_expectation(state),
                                    std::move(state_label), scan, spectral);
}

HomCurve simulate_hom_scan(HyperLabel label, const ScanConfig& scan,
                           const SpectralModel& spectral);
HomCurve simulate_hom_scan(PolBellLabel label, const ScanConfig& scan,
                           const SpectralModel& spectral);
HomCurve simulate_hom_scan(OamBellLabel label, const ScanConfig& scan,
                           const SpectralModel& spectral);

struct PhaseNoiseConfig {
  double pairs_per_point = 0.0;  // 0 disables sampling
  double accidental_rate = 0.0;
  std::uint64_t rng_seed = 1;
};

struct PhaseScan {
  std::vector<double> thetas;
  std::vector<double> p_plus;   // joint projection probabilities per theta
  std::vector<double> p_minus;
  std::vector<double> m_theta;  // (P+ - P-) / (P+ + P-)
  std::vector<std::uint64_t> counts_plus;   // empty when not sampled
  std::vector<std::uint64_t> counts_minus;
  double phi_p = 0.0;  // exchange phase of the VV polarization component
  double phi_o = 0.0;  // OAM exchange phase recovered by the protocol, noiseless
  std::string state_label;
  std::uint64_t seed = 0;

  bool sampled() const { return !counts_plus.empty(); }
  /// Estimate of m_theta at point i from sampled counts when present.
  double measured_m(std::size_t i) const;
};

/// Exchange-phase protocol: the source phi+ x <label> enters the polarizing
/// beam splitter, the compensator removes the reflection phase and the VV
/// polarization exchange phase, and the coincidence branch is read out with
/// photon 1 projected on (H+V)/sqrt2 and photon 2 on (H +- e^{i theta} V)/sqrt2.
PhaseScan phase_protocol_scan(OamBellLabel label, std::span<const double> thetas,
                              const PhaseNoiseConfig& noise,
                              const SpectralModel& spectral);

/// Waveplate angle realizing the photon-2 analyzer at phase theta.
double hwp_angle_for_theta(double theta);

/// n equally spaced analyzer phases covering [0, 2 pi).
std::vector<double> theta_grid(int n);

}  // namespace homsim
