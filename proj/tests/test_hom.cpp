#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string_view>
#include <vector>

#include "homsim/hom.hpp"
#include "homsim/optics.hpp"
#include "homsim/random.hpp"
#include "homsim/spectral.hpp"

using namespace homsim;

namespace {

constexpr double kPi = std::numbers::pi;

// Overlap factor recomputed from its definition: the squared magnitude of
// the Fourier transform of the normalized intensity spectrum, by midpoint
// quadrature. Shares no code with SpectralModel's closed form.
double quadrature_overlap(const SpectralModel& sp, double tau) {
  const double c = 299792458.0;
  const double fwhm_omega =
      2.0 * kPi * c * sp.filter_fwhm / (sp.center_wavelength * sp.center_wavelength);
  const double sigma = fwhm_omega / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  const int n = 4001;
  const double span = 8.0 * sigma;
  double re = 0.0, im = 0.0, norm = 0.0;
  for (int k = 0; k < n; ++k) {
    const double w = -span + 2.0 * span * (k + 0.5) / n;
    const double s = std::exp(-w * w / (2.0 * sigma * sigma));
    re += s * std::cos(w * tau);
    im += s * std::sin(w * tau);
    norm += s;
  }
  return (1.0 - sp.distinguishability_floor) * (re * re + im * im) / (norm * norm);
}

HyperPair mixed_symmetry_state() {
  return HyperPair(
      (hyper_state(PolBellLabel::PsiMinus, OamBellLabel::NuPlus).amplitudes() +
       hyper_state(PolBellLabel::PsiPlus, OamBellLabel::NuPlus).amplitudes()) /
      std::sqrt(2.0));
}

}  // namespace

TEST_CASE("spectral model closed forms") {
  const SpectralModel sp;
  CHECK(sp.sigma_omega() == doctest::Approx(3.9443450203700776e12).epsilon(1e-12));
  CHECK(sp.coherence_time() == doctest::Approx(1.7927102663047544e-13).epsilon(1e-12));

  SpectralModel bad;
  bad.filter_fwhm = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = SpectralModel{};
  bad.distinguishability_floor = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("temporal overlap equals the spectral quadrature") {
  SpectralModel sp;
  for (const double floor : {0.0, 0.3}) {
    sp.distinguishability_floor = floor;
    const double tc = sp.coherence_time();
    for (const double tau : {0.0, 0.25 * tc, tc, 2.0 * tc, -3.0 * tc}) {
      CHECK(temporal_overlap(sp, tau) ==
            doctest::Approx(quadrature_overlap(sp, tau)).epsilon(1e-9));
    }
  }
}

TEST_CASE("temporal overlap frozen values") {
  SpectralModel sp;
  CHECK(temporal_overlap(sp, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(temporal_overlap(sp, sp.coherence_time()) ==
        doctest::Approx(0.6065306597126334).epsilon(1e-12));
  sp.distinguishability_floor = 0.25;
  CHECK(temporal_overlap(sp, 0.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(temporal_overlap(sp, sp.coherence_time()) ==
        doctest::Approx(0.75 * 0.6065306597126334).epsilon(1e-12));
}

TEST_CASE("coincidence probability endpoints") {
  const SpectralModel sp;
  const double tc = sp.coherence_time();

  const HyperPair symmetric = hyper_state(PolBellLabel::PhiPlus, OamBellLabel::NuPlus);
  CHECK(coincidence_probability(symmetric, 0.0, sp) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(coincidence_probability(symmetric, 60.0 * tc, sp) ==
        doctest::Approx(0.5).epsilon(1e-12));

  const HyperPair antisymmetric =
      hyper_state(PolBellLabel::PsiMinus, OamBellLabel::MuPlus);
  CHECK(coincidence_probability(antisymmetric, 0.0, sp) ==
        doctest::Approx(1.0).epsilon(1e-12));

  const PolPair phi_plus = polarization_bell(PolBellLabel::PhiPlus);
  CHECK(coincidence_probability(phi_plus, tc, sp) ==
        doctest::Approx(0.1967346701436833).epsilon(1e-12));

  CHECK(coincidence_probability(mixed_symmetry_state(), 0.0, sp) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("beam splitter port machinery reproduces the factorized law at zero delay") {
  // First-quantized cross-check: symmetrize the injected pair, apply the
  // lifted splitter, and read the cross-port weight.
  const SpectralModel sp;
  const std::vector<HyperPair> states{
      hyper_state(PolBellLabel::PhiPlus, OamBellLabel::NuPlus),
      hyper_state(PolBellLabel::PsiMinus, OamBellLabel::MuMinus),
      hyper_state(PolBellLabel::PsiPlus, OamBellLabel::NuMinus),
      mixed_symmetry_state(),
  };
  for (const BsConvention conv :
       {BsConvention::MinusOnIn2, BsConvention::MinusOnIn1}) {
    const TwoPhotonTransform split = lift_two_photon(bs_unitary(conv));
    for (const HyperPair& state : states) {
      const PortPair injected = inject(state, PortLabel::In1, PortLabel::In2);
      const PortPair symmetrized(
          (injected.amplitudes() + injected.amplitudes().transpose().eval()) /
          std::sqrt(2.0));
      const PortPair out = split(symmetrized);
      const double cross =
          port_sector(out, PortLabel::Out3, PortLabel::Out4).norm2() +
          port_sector(out, PortLabel::Out4, PortLabel::Out3).norm2();
      CHECK(cross == doctest::Approx(coincidence_probability(state, 0.0, sp))
                         .epsilon(1e-10));
    }
  }
}

TEST_CASE("Fock oracle agrees with the factorized law across states, delays, floors") {
  std::vector<std::pair<Eigen::MatrixXcd, double>> cases;
  for (const HyperLabel label :
       {HyperLabel{PolBellLabel::PhiPlus, OamBellLabel::NuPlus},
        HyperLabel{PolBellLabel::PsiMinus, OamBellLabel::NuMinus},
        HyperLabel{PolBellLabel::PsiPlus, OamBellLabel::MuMinus},
        HyperLabel{PolBellLabel::PhiMinus, OamBellLabel::NuMinus}}) {
    const HyperPair s = hyper_state(label);
    cases.emplace_back(Eigen::MatrixXcd(s.amplitudes()), symmetry_expectation(s));
  }
  const HyperPair mixed = mixed_symmetry_state();
  cases.emplace_back(Eigen::MatrixXcd(mixed.amplitudes()),
                     symmetry_expectation(mixed));

  SpectralModel sp;
  for (const double floor : {0.0, 0.3}) {
    sp.distinguishability_floor = floor;
    const double tc = sp.coherence_time();
    for (const auto& [amps, sym] : cases) {
      for (const double tau : {0.0, 0.7 * tc, 2.2 * tc, -1.3 * tc}) {
        const double expected =
            0.5 * (1.0 - sym * temporal_overlap(sp, tau));
        const FockOracleResult got =
            full_fock_oracle_matrix(amps, tau, sp, 256, false);
        CHECK(std::abs(got.p_coincidence - expected) < 1e-6);
      }
    }
  }
}

TEST_CASE("Fock oracle convergence flag and input validation") {
  const HyperPair s = hyper_state(PolBellLabel::PhiPlus, OamBellLabel::NuPlus);
  const SpectralModel sp;
  const FockOracleResult r =
      full_fock_oracle(s, 1.5 * sp.coherence_time(), sp, 128, true);
  CHECK(r.converged);
  CHECK(r.grid_change < 1e-9);

  CHECK_THROWS_AS(full_fock_oracle(s, 0.0, sp, 16), std::invalid_argument);
  CHECK_THROWS_AS(
      full_fock_oracle_matrix(Eigen::MatrixXcd::Zero(2, 3), 0.0, sp, 128),
      std::invalid_argument);
  CHECK_THROWS_AS(full_fock_oracle(HyperPair(), 0.0, sp, 128),
                  std::invalid_argument);
}

TEST_CASE("Fock oracle is independent of the splitter phase convention") {
  const HyperPair s = hyper_state(PolBellLabel::PsiPlus, OamBellLabel::NuMinus);
  SpectralModel sp;
  sp.distinguishability_floor = 0.1;
  const double tau = 0.9 * sp.coherence_time();
  const double a = full_fock_oracle(s, tau, sp, 256, false,
                                    BsPhaseConvention::MinusOnIn2).p_coincidence;
  const double b = full_fock_oracle(s, tau, sp, 256, false,
                                    BsPhaseConvention::MinusOnIn1).p_coincidence;
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("the full output distribution is normalized") {
  SpectralModel sp;
  for (const double floor : {0.0, 0.4, 1.0}) {
    sp.distinguishability_floor = floor;
    for (const HyperLabel label :
         {HyperLabel{PolBellLabel::PhiPlus, OamBellLabel::NuPlus},
          HyperLabel{PolBellLabel::PsiMinus, OamBellLabel::NuMinus}}) {
      const HyperPair s = hyper_state(label);
      for (const double tau : {0.0, 1.4 * sp.coherence_time()}) {
        const FockDistribution d = full_fock_distribution(
            Eigen::MatrixXcd(s.amplitudes()), tau, sp, 128);
        CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("fully distinguishable photons split half and half") {
  SpectralModel sp;
  sp.distinguishability_floor = 1.0;
  const HyperPair s = hyper_state(PolBellLabel::PhiPlus, OamBellLabel::NuPlus);
  const FockDistribution d =
      full_fock_distribution(Eigen::MatrixXcd(s.amplitudes()), 0.0, sp, 128);
  CHECK(d.p_coincidence == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(d.p_both_out3 == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(d.p_both_out4 == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("scan configs validate and default to three coherence times") {
  const SpectralModel sp;
  const ScanConfig scan = ScanConfig::default_for(sp);
  CHECK(scan.delay_min == doctest::Approx(-3.0 * sp.coherence_time()));
  CHECK(scan.delay_max == doctest::Approx(3.0 * sp.coherence_time()));
  CHECK(scan.n_points == 41);

  ScanConfig bad = scan;
  bad.delay_min = bad.delay_max;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = scan;
  bad.n_points = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = scan;
  bad.pairs_per_point = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("simulated scans carry the model curve plus per-point Poisson draws") {
  const SpectralModel sp;
  ScanConfig scan = ScanConfig::default_for(sp);
  scan.pairs_per_point = 1200.0;
  scan.accidental_rate = 10.0;
  scan.rng_seed = 77;

  const HomCurve curve =
      simulate_hom_scan(HyperLabel{PolBellLabel::PhiPlus, OamBellLabel::NuMinus},
                        scan, sp);
  REQUIRE(curve.delays.size() == 41);
  CHECK(curve.state_label == "phi+ x nu-");
  CHECK(curve.delays.front() == doctest::Approx(scan.delay_min));
  CHECK(curve.delays.back() == doctest::Approx(scan.delay_max));

  // Antisymmetric state: peak at zero delay.
  const double mid = curve.expected[20];
  CHECK(mid == doctest::Approx(1200.0 + 10.0).epsilon(1e-9));

  // Each point must be exactly the Poisson draw of its own stream, whose
  // seed mixes the scan seed with an FNV-1a hash of the state label.
  std::uint64_t salt = 1469598103934665603ull;
  for (const unsigned char c : std::string_view("phi+ x nu-")) {
    salt ^= c;
    salt *= 1099511628211ull;
  }
  for (int i = 0; i < 41; ++i) {
    RandomStream stream(77 ^ salt, static_cast<std::uint64_t>(i));
    CHECK(curve.sampled[i] == stream.poisson(curve.expected[i]));
  }

  // Repeating the simulation reproduces the draws bit for bit.
  const HomCurve again =
      simulate_hom_scan(HyperLabel{PolBellLabel::PhiPlus, OamBellLabel::NuMinus},
                        scan, sp);
  CHECK(again.sampled == curve.sampled);

  // Two states with identical expected curves draw independent noise.
  const HomCurve other = simulate_hom_scan(
      HyperLabel{PolBellLabel::PsiMinus, OamBellLabel::NuPlus}, scan, sp);
  CHECK(other.expected == curve.expected);
  CHECK(other.sampled != curve.sampled);
}

TEST_CASE("weighted scan rejects out-of-range symmetry") {
  const SpectralModel sp;
  const ScanConfig scan = ScanConfig::default_for(sp);
  CHECK_THROWS_AS(simulate_hom_scan_weighted(1.5, "x", scan, sp),
                  std::invalid_argument);
}

TEST_CASE("phase protocol recovers the analyzer law exactly") {
  const SpectralModel sp;
  const std::vector<double> thetas = theta_grid(32);
  const double truth[] = {0.0, 0.0, 0.0, kPi};
  int idx = 0;
  for (const OamBellLabel label : all_oam_labels()) {
    const PhaseScan scan = phase_protocol_scan(label, thetas, {}, sp);
    CHECK(scan.phi_o == doctest::Approx(truth[idx]).epsilon(1e-12));
    CHECK_FALSE(scan.sampled());
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      CHECK(std::abs(scan.m_theta[i] - std::cos(thetas[i] - truth[idx])) < 1e-12);
      CHECK(scan.p_plus[i] >= 0.0);
      CHECK(scan.p_minus[i] >= 0.0);
    }
    ++idx;
  }
}

TEST_CASE("a distinguishability floor scales the analyzer fringe") {
  SpectralModel sp;
  sp.distinguishability_floor = 0.2;
  const std::vector<double> thetas = theta_grid(16);
  const PhaseScan scan = phase_protocol_scan(OamBellLabel::MuPlus, thetas, {}, sp);
  for (std::size_t i = 0; i < thetas.size(); ++i)
    CHECK(scan.m_theta[i] == doctest::Approx(0.8 * std::cos(thetas[i])).epsilon(1e-9));
}

TEST_CASE("sampled phase scans are reproducible and close to the law") {
  const SpectralModel sp;
  PhaseNoiseConfig noise;
  noise.pairs_per_point = 4000.0;
  noise.rng_seed = 11;
  const std::vector<double> thetas = theta_grid(16);
  const PhaseScan scan =
      phase_protocol_scan(OamBellLabel::NuMinus, thetas, noise, sp);
  REQUIRE(scan.sampled());
  REQUIRE(scan.counts_plus.size() == thetas.size());

  const PhaseScan again =
      phase_protocol_scan(OamBellLabel::NuMinus, thetas, noise, sp);
  CHECK(again.counts_plus == scan.counts_plus);
  CHECK(again.counts_minus == scan.counts_minus);

  for (std::size_t i = 0; i < thetas.size(); ++i)
    CHECK(std::abs(scan.measured_m(i) - scan.m_theta[i]) < 0.2);
}

TEST_CASE("protocol guards and helpers") {
  const SpectralModel sp;
  CHECK_THROWS_AS(phase_protocol_scan(OamBellLabel::MuPlus, {}, {}, sp),
                  std::invalid_argument);
  CHECK_THROWS_AS(theta_grid(1), std::invalid_argument);

  const std::vector<double> grid = theta_grid(8);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(2.0 * kPi * 7.0 / 8.0));

  CHECK(hwp_angle_for_theta(0.0) == doctest::Approx(3.0 * kPi / 8.0));
  CHECK(hwp_angle_for_theta(kPi) == doctest::Approx(3.0 * kPi / 8.0 + kPi / 4.0));
}
