#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homsim/bell.hpp"
#include "homsim/state.hpp"

namespace homsim {

enum class ElementKind : std::uint8_t {
  Hwp,
  Qwp,
  DovePrism,
  Babinet,
  Mirror,
  DelayLine,
  Bs,
  Pbs,
};

/// One placed element. `parameter` is the waveplate/prism angle or the
/// compensator phase in radians (seconds for the delay line); it is unused
/// for Mirror/Bs/Pbs. `arm` is ignored by the two-arm elements Bs/Pbs.
struct ElementSetting {
  ElementKind kind;
  double parameter = 0.0;
  PortLabel arm = PortLabel::In1;
};

bool operator==(const ElementSetting& a, const ElementSetting& b);

/// Which input acquires the minus sign toward Out4. Physical predictions may
/// not depend on this choice.
enum class BsConvention : std::uint8_t { MinusOnIn2, MinusOnIn1 };

/// Single-photon transform on the (port x internal) mode space. Unitarity is
/// checked on construction.
class ModeUnitary {
 public:
  static constexpr int dim = ModeSpace<PortMode>::dim;
  using Matrix = Eigen::Matrix<cxd, dim, dim>;

  static ModeUnitary identity() { return ModeUnitary(Matrix::Identity()); }
  explicit ModeUnitary(const Matrix& m);

  const Matrix& matrix() const { return m_; }

  /// Composition in propagation order: light passes *this first.
  ModeUnitary then(const ModeUnitary& next) const {
    return ModeUnitary(next.m_ * m_);
  }

  SinglePhotonState<PortMode> apply(const SinglePhotonState<PortMode>& s) const {
    return SinglePhotonState<PortMode>(m_ * s.amplitudes());
  }

 private:
  Matrix m_;
};

ModeUnitary hwp_unitary(double theta, PortLabel arm);
ModeUnitary qwp_unitary(double theta, PortLabel arm);
ModeUnitary dove_unitary(double alpha, int m, PortLabel arm);
ModeUnitary mirror_unitary(PortLabel arm);

/// Babinet compensator: phase e^{i phi} on V in the given arm.
ModeUnitary bc_unitary(double phi, PortLabel arm);

/// Balanced beam splitter between the two input and the two output arms,
/// acting identically on every internal mode.
ModeUnitary bs_unitary(BsConvention conv = BsConvention::MinusOnIn2);

/// Polarizing beam splitter: H transmits (In1->Out3, In2->Out4), V reflects
/// (In1->Out4, In2->Out3) with phase i per reflection.
ModeUnitary pbs_unitary();

ModeUnitary element_unitary(const ElementSetting& e, int m = 1);

/// Product of the element unitaries in propagation order. Rejects circuits
/// that leave an odd number of mirror reflections on any arm, since those
/// flip the OAM handedness of the path.
ModeUnitary compose_circuit(std::span<const ElementSetting> elements, int m = 1);

/// Same single-photon transform applied to both photons of a pair.
class TwoPhotonTransform {
 public:
  explicit TwoPhotonTransform(ModeUnitary u) : u_(std::move(u)) {}
  PortPair operator()(const PortPair& s) const;
  const ModeUnitary& unitary() const { return u_; }

 private:
  ModeUnitary u_;
};

inline TwoPhotonTransform lift_two_photon(ModeUnitary u) {
  return TwoPhotonTransform(std::move(u));
}

/// Place an internal-mode pair state on a pair of arms.
PortPair inject(const HyperPair& s, PortLabel arm1, PortLabel arm2);

/// Amplitudes with photon 1 on arm `p1` and photon 2 on arm `p2`, as an
/// internal-mode pair state. Generally unnormalized; norm2() is the weight
/// of that sector.
HyperPair port_sector(const PortPair& s, PortLabel p1, PortLabel p2);

/// Element settings that turn the source state phi+ x nu+ into the target,
/// using waveplates and Dove prisms on arm 1 only.
std::vector<ElementSetting> prepare_hyper(HyperLabel target);

/// Run a preparation circuit (no Bs/Pbs) on a source pair fed into In1/In2.
HyperPair apply_preparation(const HyperPair& source,
                            std::span<const ElementSetting> elements, int m = 1);

std::string to_text(const ElementSetting& e);            // "arm1: HWP 45deg"
std::optional<ElementSetting> parse_element(std::string_view line);

}  // namespace homsim
