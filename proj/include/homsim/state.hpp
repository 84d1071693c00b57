#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "homsim/modes.hpp"

namespace homsim {

template <ModeKind M>
class SinglePhotonState {
 public:
  static constexpr int dim = ModeSpace<M>::dim;
  using Vector = Eigen::Matrix<cxd, dim, 1>;

  SinglePhotonState() : amps_(Vector::Zero()) {}
  explicit SinglePhotonState(const Vector& v) : amps_(v) {}

  static SinglePhotonState basis(M mode) {
    Vector v = Vector::Zero();
    v(ModeSpace<M>::index(mode)) = cxd(1.0, 0.0);
    return SinglePhotonState(v);
  }

  cxd amplitude(M mode) const { return amps_(ModeSpace<M>::index(mode)); }
  const Vector& amplitudes() const { return amps_; }

  double norm2() const { return amps_.squaredNorm(); }
  bool is_normalized(double tol = kInputNormTol) const {
    return std::abs(norm2() - 1.0) <= tol;
  }

  /// Unit-norm copy. Throws on the zero state.
  SinglePhotonState normalized() const {
    const double n2 = norm2();
    if (n2 <= kInternalTol * kInternalTol)
      throw std::invalid_argument("cannot normalize a zero state");
    return SinglePhotonState(amps_ / std::sqrt(n2));
  }

 private:
  Vector amps_;
};

/// Joint state of the labeled photon pair. amplitude(m1, m2) multiplies
/// |m1> of photon 1 with |m2> of photon 2; entries follow the canonical
/// mode order of M on both axes.
template <ModeKind M>
class TwoPhotonState {
 public:
  static constexpr int dim = ModeSpace<M>::dim;
  using Matrix = Eigen::Matrix<cxd, dim, dim>;

  TwoPhotonState() : amps_(Matrix::Zero()) {}
  explicit TwoPhotonState(const Matrix& m) : amps_(m) {}

  static TwoPhotonState basis(M m1, M m2) {
    Matrix m = Matrix::Zero();
    m(ModeSpace<M>::index(m1), ModeSpace<M>::index(m2)) = cxd(1.0, 0.0);
    return TwoPhotonState(m);
  }

  cxd amplitude(M m1, M m2) const {
    return amps_(ModeSpace<M>::index(m1), ModeSpace<M>::index(m2));
  }
  const Matrix& amplitudes() const { return amps_; }

  double norm2() const { return amps_.squaredNorm(); }
  bool is_normalized(double tol = kInputNormTol) const {
    return std::abs(norm2() - 1.0) <= tol;
  }

  /// Unit-norm copy; norm2() of the original is the branch probability when
  /// the input came out of a post-selection. Throws on the zero state.
  TwoPhotonState normalized() const {
    const double n2 = norm2();
    if (n2 <= kInternalTol * kInternalTol)
      throw std::invalid_argument("cannot normalize a zero state");
    return TwoPhotonState(amps_ / std::sqrt(n2));
  }

 private:
  Matrix amps_;
};

/// Product state of two independently prepared photons. Inputs must be
/// normalized.
template <ModeKind M>
TwoPhotonState<M> tensor_product(const SinglePhotonState<M>& photon1,
                                 const SinglePhotonState<M>& photon2) {
  if (!photon1.is_normalized() || !photon2.is_normalized())
    throw std::invalid_argument("tensor_product requires normalized inputs");
  return TwoPhotonState<M>(photon1.amplitudes() *
                           photon2.amplitudes().transpose());
}

/// Swap the photon labels: amplitude'(m1, m2) = amplitude(m2, m1).
template <ModeKind M>
TwoPhotonState<M> exchange(const TwoPhotonState<M>& s) {
  return TwoPhotonState<M>(s.amplitudes().transpose().eval());
}

template <ModeKind M>
cxd inner_product(const TwoPhotonState<M>& a, const TwoPhotonState<M>& b) {
  return (a.amplitudes().conjugate().cwiseProduct(b.amplitudes())).sum();
}

/// <s|X|s> with X the label-swap operator. Real by construction; +1 on
/// exchange-symmetric states, -1 on antisymmetric ones.
template <ModeKind M>
double symmetry_expectation(const TwoPhotonState<M>& s) {
  if (!s.is_normalized())
    throw std::invalid_argument("symmetry_expectation requires a normalized state");
  return inner_product(s, exchange(s)).real();
}

/// Project photon 1 on <bra1| and photon 2 on <bra2|; returns the resulting
/// scalar amplitude.
template <ModeKind M>
cxd project(const TwoPhotonState<M>& s, const SinglePhotonState<M>& bra1,
            const SinglePhotonState<M>& bra2) {
  if (!bra1.is_normalized() || !bra2.is_normalized())
    throw std::invalid_argument("project requires normalized bra states");
  return (bra1.amplitudes().adjoint() * s.amplitudes() *
          bra2.amplitudes().conjugate())(0, 0);
}

/// |<a|b>|^2 for normalized states; insensitive to global phase.
template <ModeKind M>
double fidelity(const TwoPhotonState<M>& a, const TwoPhotonState<M>& b) {
  return std::norm(inner_product(a, b));
}

using PolPhoton = SinglePhotonState<Polarization>;
using OamPhoton = SinglePhotonState<OamSign>;
using HyperPhoton = SinglePhotonState<InternalMode>;
using PolPair = TwoPhotonState<Polarization>;
using OamPair = TwoPhotonState<OamSign>;
using HyperPair = TwoPhotonState<InternalMode>;

/// Photon pair inside the interferometer, modes labeled by (port, internal).
using PortPair = TwoPhotonState<PortMode>;

}  // namespace homsim
