#include "homsim/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace homsim {

namespace {

struct LmResult {
  Eigen::VectorXd params;
  Eigen::MatrixXd covariance;
  double residual_rms = 0.0;
  bool converged = false;
};

// Model callback: value at x for params p, writing d(model)/dp into grad.
using LmModel = std::function<double(double, const Eigen::VectorXd&, Eigen::VectorXd&)>;

double sum_squared_residuals(const LmModel& model, std::span<const double> xs,
                             std::span<const double> ys,
                             std::span<const double> ws,
                             const Eigen::VectorXd& p) {
  Eigen::VectorXd grad(p.size());
  double ssr = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - model(xs[i], p, grad);
    ssr += ws[i] * r * r;
  }
  return ssr;
}

// Weighted Levenberg-Marquardt. residual_rms is reported unweighted, in the
// units of ys; the covariance uses the weighted normal equations.
LmResult lm_fit(const LmModel& model, std::span<const double> xs,
                std::span<const double> ys, std::span<const double> ws,
                Eigen::VectorXd p, int max_iterations = 200) {
  const int n = static_cast<int>(xs.size());
  const int np = static_cast<int>(p.size());
  double lambda = 1e-3;
  double ssr = sum_squared_residuals(model, xs, ys, ws, p);
  bool converged = false;

  Eigen::MatrixXd jtj(np, np);
  Eigen::VectorXd jtr(np), grad(np);
  for (int iter = 0; iter < max_iterations && !converged; ++iter) {
    jtj.setZero();
    jtr.setZero();
    for (int i = 0; i < n; ++i) {
      const double r = ys[i] - model(xs[i], p, grad);
      jtj.noalias() += ws[i] * grad * grad.transpose();
      jtr.noalias() += ws[i] * grad * r;
    }

    bool accepted = false;
    for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
      Eigen::MatrixXd damped = jtj;
      damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-30);
      const Eigen::VectorXd step = damped.ldlt().solve(jtr);
      if (!step.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      const Eigen::VectorXd trial = p + step;
      const double trial_ssr = sum_squared_residuals(model, xs, ys, ws, trial);
      if (trial_ssr <= ssr) {
        const double rel_step =
            step.norm() / std::max(1e-300, p.norm() + step.norm());
        const double improvement = ssr - trial_ssr;
        p = trial;
        ssr = trial_ssr;
        lambda = std::max(1e-12, lambda / 3.0);
        accepted = true;
        if (rel_step < 1e-13 || improvement <= 1e-15 * (ssr + 1e-300))
          converged = true;
      } else {
        lambda *= 10.0;
        if (lambda > 1e14) {
          converged = true;  // stuck in a flat basin; current point is the answer
          accepted = true;
        }
      }
    }
    if (!accepted) converged = true;
  }

  LmResult result;
  result.params = p;
  result.converged = converged;

  double raw_ssr = 0.0;
  jtj.setZero();
  for (int i = 0; i < n; ++i) {
    const double r = ys[i] - model(xs[i], p, grad);
    raw_ssr += r * r;
    jtj.noalias() += ws[i] * grad * grad.transpose();
  }
  result.residual_rms = std::sqrt(raw_ssr / n);
  const double dof_variance = n > np ? ssr / (n - np) : 0.0;

  // Parameters can differ by many orders of magnitude (counts vs widths in
  // seconds), which would push the well-measured directions below the
  // pseudo-inverse rank threshold. Equilibrate to unit diagonal first.
  Eigen::VectorXd d(np);
  for (int k = 0; k < np; ++k)
    d(k) = jtj(k, k) > 0.0 ? 1.0 / std::sqrt(jtj(k, k)) : 1.0;
  const Eigen::MatrixXd scaled = d.asDiagonal() * jtj * d.asDiagonal();
  const Eigen::MatrixXd inverse =
      scaled.completeOrthogonalDecomposition().pseudoInverse();
  result.covariance =
      dof_variance * (d.asDiagonal() * inverse * d.asDiagonal());
  return result;
}

double tail_mean(std::span<const double> ys) {
  const std::size_t quarter = std::max<std::size_t>(1, ys.size() / 4);
  double sum = 0.0;
  for (std::size_t i = 0; i < quarter; ++i)
    sum += ys[i] + ys[ys.size() - 1 - i];
  return sum / (2.0 * quarter);
}

}  // namespace

HomFit fit_hom(std::span<const double> delays, std::span<const double> counts) {
  if (delays.size() != counts.size())
    throw std::invalid_argument("fit_hom: mismatched series lengths");
  if (delays.size() < 7)
    throw std::invalid_argument("fit_hom needs at least 7 points");

  const double baseline = tail_mean(counts);
  HomFit fit;
  if (!(baseline > 0.0)) {
    fit.reliable = false;
    return fit;  // all-dark data carries no feature to fit
  }

  std::size_t extremum = 0;
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (std::abs(counts[i] - baseline) > std::abs(counts[extremum] - baseline))
      extremum = i;
  const double s = counts[extremum] <= baseline ? 1.0 : -1.0;

  Eigen::VectorXd p(4);
  p << baseline,
      std::clamp(std::abs(1.0 - counts[extremum] / baseline), 0.01, 1.2),
      delays[extremum], (delays.back() - delays.front()) / 6.0;

  const LmModel model = [s](double tau, const Eigen::VectorXd& q,
                            Eigen::VectorXd& grad) {
    const double b = q(0), v = q(1), tau0 = q(2), w = q(3);
    const double z = (tau - tau0) / w;
    const double e = std::exp(-0.5 * z * z);
    grad(0) = 1.0 - s * v * e;
    grad(1) = -s * b * e;
    grad(2) = -s * b * v * e * z / w;
    grad(3) = -s * b * v * e * z * z / w;
    return b * (1.0 - s * v * e);
  };

  // Counting statistics: weight each point by the reciprocal of its
  // Poisson variance estimate.
  std::vector<double> weights(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    weights[i] = 1.0 / std::max(counts[i], 1.0);

  const LmResult lm = lm_fit(model, delays, counts, weights, p);
  if (!lm.converged) throw std::runtime_error("fit_hom did not converge");

  const double v_raw = lm.params(1);
  fit.c_inf = lm.params(0);
  fit.c0 = lm.params(0) * (1.0 - s * v_raw);
  fit.center = lm.params(2);
  fit.width = std::abs(lm.params(3));
  fit.kind = s > 0.0 ? DipKind::Dip : DipKind::Peak;
  fit.visibility = std::clamp(v_raw, 0.0, 1.0);
  fit.visibility_stderr = std::sqrt(std::max(0.0, lm.covariance(1, 1)));
  fit.residual_rms = lm.residual_rms;
  fit.reliable = v_raw > 0.0 &&
                 (fit.visibility_stderr == 0.0 ||
                  v_raw >= 3.0 * fit.visibility_stderr);
  return fit;
}

HomFit fit_hom(const HomCurve& curve, bool use_sampled) {
  if (!use_sampled) return fit_hom(curve.delays, curve.expected);
  std::vector<double> counts(curve.sampled.begin(), curve.sampled.end());
  return fit_hom(curve.delays, counts);
}

double visibility(double c0, double c_inf, DipKind kind) {
  if (!(c_inf > 0.0))
    throw std::invalid_argument("visibility requires positive baseline counts");
  const double v = kind == DipKind::Dip ? 1.0 - c0 / c_inf : c0 / c_inf - 1.0;
  return std::clamp(v, 0.0, 1.0);
}

PhaseFit fit_phase(std::span<const double> thetas,
                   std::span<const double> m_values) {
  if (thetas.size() != m_values.size())
    throw std::invalid_argument("fit_phase: mismatched series lengths");
  const int n = static_cast<int>(thetas.size());
  if (n < 4) throw std::invalid_argument("fit_phase needs at least 4 points");

  // Exact solution of the equivalent linear model a cos + b sin + c.
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    design(i, 0) = std::cos(thetas[i]);
    design(i, 1) = std::sin(thetas[i]);
    design(i, 2) = 1.0;
    y(i) = m_values[i];
  }
  const Eigen::VectorXd linear =
      (design.transpose() * design).ldlt().solve(design.transpose() * y);

  Eigen::VectorXd p(3);
  p << std::hypot(linear(0), linear(1)), std::atan2(linear(1), linear(0)),
      linear(2);

  const LmModel model = [](double theta, const Eigen::VectorXd& q,
                           Eigen::VectorXd& grad) {
    const double a = q(0), phi = q(1), b = q(2);
    grad(0) = std::cos(theta - phi);
    grad(1) = a * std::sin(theta - phi);
    grad(2) = 1.0;
    return a * grad(0) + b;
  };

  // The modulation values are count ratios of comparable precision across
  // theta, so unit weights apply.
  const std::vector<double> weights(thetas.size(), 1.0);
  const LmResult lm = lm_fit(model, thetas, m_values, weights, p);
  if (!lm.converged) throw std::runtime_error("fit_phase did not converge");

  double amplitude = lm.params(0);
  double phi = lm.params(1);
  if (amplitude < 0.0) {
    amplitude = -amplitude;
    phi += std::numbers::pi;
  }
  phi = std::fmod(phi, 2.0 * std::numbers::pi);
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;

  PhaseFit fit;
  fit.phi = phi;
  fit.amplitude = amplitude;
  fit.offset = lm.params(2);
  fit.phi_stderr = std::sqrt(std::max(0.0, lm.covariance(1, 1)));
  fit.residual_rms = lm.residual_rms;
  const double amp_stderr = std::sqrt(std::max(0.0, lm.covariance(0, 0)));
  fit.reliable =
      amplitude > 0.0 && (amp_stderr == 0.0 || amplitude >= 3.0 * amp_stderr);
  return fit;
}

PhaseFit fit_phase(const PhaseScan& scan, bool use_sampled) {
  if (use_sampled && !scan.sampled())
    throw std::invalid_argument("fit_phase: scan carries no sampled counts");
  std::vector<double> m(scan.thetas.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    m[i] = use_sampled ? scan.measured_m(i) : scan.m_theta[i];
  return fit_phase(scan.thetas, m);
}

BunchingClass classify_from_curve(const HomFit& fit) {
  if (!fit.reliable)
    throw std::runtime_error(
        "classify_from_curve: fit is not reliable enough to classify");
  return fit.kind == DipKind::Dip ? BunchingClass::Bunching
                                  : BunchingClass::AntiBunching;
}

}  // namespace homsim
