#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace homsim {

using cxd = std::complex<double>;

// Inputs are accepted as normalized within this tolerance; internal algebra
// is held to the tighter one.
inline constexpr double kInputNormTol = 1e-9;
inline constexpr double kInternalTol = 1e-12;

enum class Polarization : std::uint8_t { H = 0, V = 1 };
enum class OamSign : std::uint8_t { Plus = 0, Minus = 1 };

/// OAM quantum number +-m carried by one photon, m >= 1.
struct OamIndex {
  int m = 1;
  OamSign sign = OamSign::Plus;
};

inline void validate_oam_order(int m) {
  if (m < 1) throw std::invalid_argument("OAM order m must be >= 1");
}

/// One photon's internal mode: polarization and OAM sign, with the OAM order
/// m fixed by context. Canonical order: H+, H-, V+, V-.
struct InternalMode {
  Polarization pol;
  OamSign oam;
};

constexpr bool operator==(InternalMode a, InternalMode b) {
  return a.pol == b.pol && a.oam == b.oam;
}

/// Port labels of the interference unit. In1/In2 are the source arms,
/// Out3/Out4 the detector arms.
enum class PortLabel : std::uint8_t { In1 = 0, In2 = 1, Out3 = 2, Out4 = 3 };

/// Mode of one photon inside the interferometer: which arm it occupies plus
/// its internal state.
struct PortMode {
  PortLabel port;
  InternalMode mode;
};

constexpr bool operator==(PortMode a, PortMode b) {
  return a.port == b.port && a.mode == b.mode;
}

template <typename M>
struct ModeSpace;

template <>
struct ModeSpace<Polarization> {
  static constexpr int dim = 2;
  static constexpr int index(Polarization p) { return static_cast<int>(p); }
  static constexpr Polarization from_index(int i) {
    return static_cast<Polarization>(i);
  }
  static std::string name(Polarization p) {
    return p == Polarization::H ? "H" : "V";
  }
};

template <>
struct ModeSpace<OamSign> {
  static constexpr int dim = 2;
  static constexpr int index(OamSign s) { return static_cast<int>(s); }
  static constexpr OamSign from_index(int i) { return static_cast<OamSign>(i); }
  static std::string name(OamSign s) {
    return s == OamSign::Plus ? "+m" : "-m";
  }
};

template <>
struct ModeSpace<InternalMode> {
  static constexpr int dim = 4;
  static constexpr int index(InternalMode m) {
    return 2 * static_cast<int>(m.pol) + static_cast<int>(m.oam);
  }
  static constexpr InternalMode from_index(int i) {
    return InternalMode{static_cast<Polarization>(i / 2),
                        static_cast<OamSign>(i % 2)};
  }
  static std::string name(InternalMode m) {
    return ModeSpace<Polarization>::name(m.pol) +
           ModeSpace<OamSign>::name(m.oam);
  }
};

template <>
struct ModeSpace<PortMode> {
  static constexpr int dim = 16;
  static constexpr int index(PortMode m) {
    return 4 * static_cast<int>(m.port) + ModeSpace<InternalMode>::index(m.mode);
  }
  static constexpr PortMode from_index(int i) {
    return PortMode{static_cast<PortLabel>(i / 4),
                    ModeSpace<InternalMode>::from_index(i % 4)};
  }
  static std::string name(PortMode m);
};

template <typename M>
concept ModeKind = (ModeSpace<M>::dim > 0);

inline std::string port_name(PortLabel p) {
  switch (p) {
    case PortLabel::In1: return "arm1";
    case PortLabel::In2: return "arm2";
    case PortLabel::Out3: return "arm3";
    case PortLabel::Out4: return "arm4";
  }
  return "?";
}

inline std::string ModeSpace<PortMode>::name(PortMode m) {
  return port_name(m.port) + ":" + ModeSpace<InternalMode>::name(m.mode);
}

}  // namespace homsim
