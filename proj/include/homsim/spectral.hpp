#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace homsim {

/// Gaussian spectral envelope of the photon pair after filtering, plus a
/// distinguishability floor for everything the delay line cannot erase
/// (residual spatial/spectral mismatch).
struct SpectralModel {
  // Defaults are written as nm * 1e-9 products so a spec file carrying the
  // same nm figures parses to bit-identical values.
  double center_wavelength = 780.0 * 1e-9;  // m
  double filter_fwhm = 3.0 * 1e-9;          // m, intensity FWHM of the filter
  double distinguishability_floor = 0.0;

  void validate() const {
    if (!(center_wavelength > 0.0))
      throw std::invalid_argument("center_wavelength must be positive");
    if (!(filter_fwhm > 0.0))
      throw std::invalid_argument("filter_fwhm must be positive");
    if (!(distinguishability_floor >= 0.0 && distinguishability_floor <= 1.0))
      throw std::invalid_argument("distinguishability_floor must lie in [0, 1]");
  }

  /// Standard deviation of the intensity spectrum in angular frequency.
  double sigma_omega() const {
    constexpr double c = 299792458.0;
    constexpr double to_sigma = 2.3548200450309493;  // 2 sqrt(2 ln 2)
    const double fwhm_omega = 2.0 * std::numbers::pi * c * filter_fwhm /
                              (center_wavelength * center_wavelength);
    return fwhm_omega / to_sigma;
  }

  /// G(tau) = (1 - floor) exp(-tau^2 / (2 tau_c^2)) with this tau_c.
  double coherence_time() const { return 1.0 / (std::sqrt(2.0) * sigma_omega()); }
};

/// Overlap factor multiplying the two-photon interference term at relative
/// delay tau. Equals the squared magnitude of the spectral intensity
/// distribution's Fourier transform, scaled by the floor.
inline double temporal_overlap(const SpectralModel& spectral, double tau) {
  spectral.validate();
  const double tc = spectral.coherence_time();
  return (1.0 - spectral.distinguishability_floor) *
         std::exp(-tau * tau / (2.0 * tc * tc));
}

}  // namespace homsim
