#pragma once

#include <span>

#include "homsim/hom.hpp"

namespace homsim {

enum class DipKind : std::uint8_t { Dip, Peak };
enum class BunchingClass : std::uint8_t { Bunching, AntiBunching };

struct HomFit {
  double c0 = 0.0;     // fitted counts at the curve extremum
  double c_inf = 0.0;  // fitted baseline counts
  double visibility = 0.0;
  double visibility_stderr = 0.0;
  double width = 0.0;   // Gaussian width of the feature, seconds
  double center = 0.0;  // delay of the extremum, seconds
  double residual_rms = 0.0;
  DipKind kind = DipKind::Dip;
  bool reliable = false;
};

struct PhaseFit {
  double phi = 0.0;  // in [0, 2 pi)
  double phi_stderr = 0.0;
  double amplitude = 0.0;
  double offset = 0.0;
  double residual_rms = 0.0;
  bool reliable = false;
};

/// Damped least-squares fit of counts(delay) to the Gaussian dip/peak model
/// c_inf (1 - s V exp(-(tau - tau0)^2 / (2 w^2))), with the feature sign s
/// fixed by the direction of the central deviation. Points are weighted by
/// 1/max(counts, 1), the Poisson variance estimate. Throws on
/// non-convergence.
HomFit fit_hom(std::span<const double> delays, std::span<const double> counts);
HomFit fit_hom(const HomCurve& curve, bool use_sampled = false);

/// Dip: 1 - c0/c_inf. Peak: c0/c_inf - 1. Clamped into [0, 1].
double visibility(double c0, double c_inf, DipKind kind);

/// Fit of A cos(theta - phi) + B, seeded by the exact linear solution in
/// (A cos phi, A sin phi, B).
PhaseFit fit_phase(std::span<const double> thetas,
                   std::span<const double> m_values);
PhaseFit fit_phase(const PhaseScan& scan, bool use_sampled = false);

/// Dip means the photons bunched, peak means they anti-bunched. Refuses
/// unreliable fits.
BunchingClass classify_from_curve(const HomFit& fit);

}  // namespace homsim
