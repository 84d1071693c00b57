#include "homsim/optics.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace homsim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr cxd kI{0.0, 1.0};

using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;
using Matrix16 = ModeUnitary::Matrix;

Matrix2 hwp_jones(double theta) {
  const double c = std::cos(2.0 * theta), s = std::sin(2.0 * theta);
  Matrix2 m;
  m << c, s, s, -c;
  return m;
}

Matrix2 qwp_jones(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Matrix2 m;
  m << c * c + kI * s * s, (1.0 - kI) * s * c,
       (1.0 - kI) * s * c, s * s + kI * c * c;
  return m;
}

Matrix2 bc_jones(double phi) {
  Matrix2 m = Matrix2::Identity();
  m(1, 1) = std::exp(kI * phi);
  return m;
}

// Dove prism: |+m> -> e^{-i 2 m alpha} |-m>, |-m> -> e^{+i 2 m alpha} |+m>.
Matrix2 dove_oam(double alpha, int m) {
  Matrix2 u = Matrix2::Zero();
  u(1, 0) = std::exp(-kI * (2.0 * m * alpha));
  u(0, 1) = std::exp(kI * (2.0 * m * alpha));
  return u;
}

Matrix2 mirror_oam() {
  Matrix2 u = Matrix2::Zero();
  u(0, 1) = 1.0;
  u(1, 0) = 1.0;
  return u;
}

// Embed an internal-mode action on a single arm, identity elsewhere.
Matrix16 on_arm(PortLabel arm, const Matrix4& internal) {
  Matrix16 u = Matrix16::Identity();
  const int base = 4 * static_cast<int>(arm);
  u.block<4, 4>(base, base) = internal;
  return u;
}

Matrix4 pol_action(const Matrix2& jones) {
  Matrix4 u = Matrix4::Zero();
  for (int p1 = 0; p1 < 2; ++p1)
    for (int p2 = 0; p2 < 2; ++p2)
      for (int o = 0; o < 2; ++o) u(2 * p1 + o, 2 * p2 + o) = jones(p1, p2);
  return u;
}

Matrix4 oam_action(const Matrix2& oam) {
  Matrix4 u = Matrix4::Zero();
  for (int p = 0; p < 2; ++p)
    for (int o1 = 0; o1 < 2; ++o1)
      for (int o2 = 0; o2 < 2; ++o2) u(2 * p + o1, 2 * p + o2) = oam(o1, o2);
  return u;
}

// Port-level action applied uniformly to all internal modes.
Matrix16 port_action(const Eigen::Matrix4cd& ports) {
  Matrix16 u = Matrix16::Zero();
  for (int pa = 0; pa < 4; ++pa)
    for (int pb = 0; pb < 4; ++pb)
      for (int i = 0; i < 4; ++i) u(4 * pa + i, 4 * pb + i) = ports(pa, pb);
  return u;
}

}  // namespace

ModeUnitary::ModeUnitary(const Matrix& m) : m_(m) {
  if ((m.adjoint() * m - Matrix::Identity()).norm() > 1e-12 * dim)
    throw std::invalid_argument("ModeUnitary: matrix is not unitary");
}

ModeUnitary hwp_unitary(double theta, PortLabel arm) {
  return ModeUnitary(on_arm(arm, pol_action(hwp_jones(theta))));
}

ModeUnitary qwp_unitary(double theta, PortLabel arm) {
  return ModeUnitary(on_arm(arm, pol_action(qwp_jones(theta))));
}

ModeUnitary dove_unitary(double alpha, int m, PortLabel arm) {
  validate_oam_order(m);
  return ModeUnitary(on_arm(arm, oam_action(dove_oam(alpha, m))));
}

ModeUnitary mirror_unitary(PortLabel arm) {
  return ModeUnitary(on_arm(arm, oam_action(mirror_oam())));
}

ModeUnitary bc_unitary(double phi, PortLabel arm) {
  return ModeUnitary(on_arm(arm, pol_action(bc_jones(phi))));
}

ModeUnitary bs_unitary(BsConvention conv) {
  const double s = (conv == BsConvention::MinusOnIn2) ? 1.0 : -1.0;
  // Self-inverse completion: the Out->In blocks mirror the In->Out ones.
  Eigen::Matrix4cd p = Eigen::Matrix4cd::Zero();
  p(2, 0) = kInvSqrt2;      // In1 -> Out3
  p(3, 0) = s * kInvSqrt2;  // In1 -> Out4
  p(2, 1) = kInvSqrt2;      // In2 -> Out3
  p(3, 1) = -s * kInvSqrt2; // In2 -> Out4
  p(0, 2) = kInvSqrt2;
  p(0, 3) = s * kInvSqrt2;
  p(1, 2) = kInvSqrt2;
  p(1, 3) = -s * kInvSqrt2;
  return ModeUnitary(port_action(p));
}

ModeUnitary pbs_unitary() {
  Eigen::Matrix4cd transmit = Eigen::Matrix4cd::Zero();
  transmit(2, 0) = transmit(0, 2) = 1.0;  // In1 <-> Out3
  transmit(3, 1) = transmit(1, 3) = 1.0;  // In2 <-> Out4
  Eigen::Matrix4cd reflect = Eigen::Matrix4cd::Zero();
  reflect(3, 0) = reflect(0, 3) = kI;     // In1 <-> Out4
  reflect(2, 1) = reflect(1, 2) = kI;     // In2 <-> Out3

  Matrix16 u = Matrix16::Zero();
  for (int i = 0; i < 4; ++i) {
    const bool horizontal = i < 2;  // internal index is pol-major
    const Eigen::Matrix4cd& ports = horizontal ? transmit : reflect;
    for (int pa = 0; pa < 4; ++pa)
      for (int pb = 0; pb < 4; ++pb) u(4 * pa + i, 4 * pb + i) = ports(pa, pb);
  }
  return ModeUnitary(u);
}

ModeUnitary element_unitary(const ElementSetting& e, int m) {
  switch (e.kind) {
    case ElementKind::Hwp:       return hwp_unitary(e.parameter, e.arm);
    case ElementKind::Qwp:       return qwp_unitary(e.parameter, e.arm);
    case ElementKind::DovePrism: return dove_unitary(e.parameter, m, e.arm);
    case ElementKind::Babinet:   return bc_unitary(e.parameter, e.arm);
    case ElementKind::Mirror:    return mirror_unitary(e.arm);
    case ElementKind::DelayLine: return ModeUnitary::identity();
    case ElementKind::Bs:        return bs_unitary();
    case ElementKind::Pbs:       return pbs_unitary();
  }
  throw std::invalid_argument("unknown element kind");
}

ModeUnitary compose_circuit(std::span<const ElementSetting> elements, int m) {
  int mirrors[4] = {0, 0, 0, 0};
  for (const ElementSetting& e : elements)
    if (e.kind == ElementKind::Mirror) ++mirrors[static_cast<int>(e.arm)];
  for (int arm = 0; arm < 4; ++arm)
    if (mirrors[arm] % 2 != 0)
      throw std::invalid_argument(
          "compose_circuit: odd mirror count on " +
          port_name(static_cast<PortLabel>(arm)) +
          " flips the OAM handedness of that path");

  ModeUnitary u = ModeUnitary::identity();
  for (const ElementSetting& e : elements) u = u.then(element_unitary(e, m));
  return u;
}

PortPair TwoPhotonTransform::operator()(const PortPair& s) const {
  const auto& u = u_.matrix();
  return PortPair(u * s.amplitudes() * u.transpose());
}

PortPair inject(const HyperPair& s, PortLabel arm1, PortLabel arm2) {
  PortPair::Matrix out = PortPair::Matrix::Zero();
  const int b1 = 4 * static_cast<int>(arm1), b2 = 4 * static_cast<int>(arm2);
  out.block<4, 4>(b1, b2) = s.amplitudes();
  return PortPair(out);
}

HyperPair port_sector(const PortPair& s, PortLabel p1, PortLabel p2) {
  const int b1 = 4 * static_cast<int>(p1), b2 = 4 * static_cast<int>(p2);
  return HyperPair(s.amplitudes().block<4, 4>(b1, b2));
}

std::vector<ElementSetting> prepare_hyper(HyperLabel target) {
  constexpr double kQuarterPi = std::numbers::pi / 4.0;
  std::vector<ElementSetting> out;
  switch (target.pol) {
    case PolBellLabel::PhiPlus:
      break;
    case PolBellLabel::PhiMinus:
      out.push_back({ElementKind::Hwp, 0.0, PortLabel::In1});
      break;
    case PolBellLabel::PsiPlus:
      out.push_back({ElementKind::Hwp, kQuarterPi, PortLabel::In1});
      break;
    case PolBellLabel::PsiMinus:
      out.push_back({ElementKind::Hwp, 0.0, PortLabel::In1});
      out.push_back({ElementKind::Hwp, kQuarterPi, PortLabel::In1});
      break;
  }
  switch (target.oam) {
    case OamBellLabel::NuPlus:
      break;
    case OamBellLabel::MuPlus:
      out.push_back({ElementKind::DovePrism, 0.0, PortLabel::In1});
      break;
    case OamBellLabel::MuMinus:
      out.push_back({ElementKind::DovePrism, kQuarterPi, PortLabel::In1});
      break;
    case OamBellLabel::NuMinus:
      out.push_back({ElementKind::DovePrism, 0.0, PortLabel::In1});
      out.push_back({ElementKind::DovePrism, kQuarterPi, PortLabel::In1});
      break;
  }
  return out;
}

HyperPair apply_preparation(const HyperPair& source,
                            std::span<const ElementSetting> elements, int m) {
  for (const ElementSetting& e : elements)
    if (e.kind == ElementKind::Bs || e.kind == ElementKind::Pbs)
      throw std::invalid_argument(
          "apply_preparation: interference elements are not preparation");
  const TwoPhotonTransform lifted = lift_two_photon(compose_circuit(elements, m));
  return port_sector(lifted(inject(source, PortLabel::In1, PortLabel::In2)),
                     PortLabel::In1, PortLabel::In2);
}

bool operator==(const ElementSetting& a, const ElementSetting& b) {
  const bool two_arm = a.kind == ElementKind::Bs || a.kind == ElementKind::Pbs;
  return a.kind == b.kind && a.parameter == b.parameter &&
         (two_arm || a.arm == b.arm);
}

namespace {

struct ElementText {
  const char* name;
  enum class Param { None, AngleDeg, DelayPs } param;
};

ElementText element_text(ElementKind k) {
  switch (k) {
    case ElementKind::Hwp:       return {"HWP", ElementText::Param::AngleDeg};
    case ElementKind::Qwp:       return {"QWP", ElementText::Param::AngleDeg};
    case ElementKind::DovePrism: return {"DP", ElementText::Param::AngleDeg};
    case ElementKind::Babinet:   return {"BC", ElementText::Param::AngleDeg};
    case ElementKind::Mirror:    return {"MIRROR", ElementText::Param::None};
    case ElementKind::DelayLine: return {"DELAY", ElementText::Param::DelayPs};
    case ElementKind::Bs:        return {"BS", ElementText::Param::None};
    case ElementKind::Pbs:       return {"PBS", ElementText::Param::None};
  }
  return {"?", ElementText::Param::None};
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::string to_text(const ElementSetting& e) {
  const ElementText t = element_text(e.kind);
  const bool two_arm = e.kind == ElementKind::Bs || e.kind == ElementKind::Pbs;
  std::string out = two_arm ? "both" : port_name(e.arm);
  out += ": ";
  out += t.name;
  switch (t.param) {
    case ElementText::Param::None:
      break;
    case ElementText::Param::AngleDeg:
      out += " " + format_number(e.parameter * 180.0 / std::numbers::pi) + "deg";
      break;
    case ElementText::Param::DelayPs:
      out += " " + format_number(e.parameter * 1e12) + "ps";
      break;
  }
  return out;
}

std::optional<ElementSetting> parse_element(std::string_view line) {
  const auto colon = line.find(':');
  if (colon == std::string_view::npos) return std::nullopt;

  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };

  const std::string_view arm_text = trim(line.substr(0, colon));
  PortLabel arm = PortLabel::In1;
  if (arm_text != "both") {
    bool found = false;
    for (int p = 0; p < 4; ++p)
      if (arm_text == port_name(static_cast<PortLabel>(p))) {
        arm = static_cast<PortLabel>(p);
        found = true;
      }
    if (!found) return std::nullopt;
  }

  std::string_view rest = trim(line.substr(colon + 1));
  const auto space = rest.find(' ');
  const std::string_view name = rest.substr(0, space);
  const std::string_view param_text =
      space == std::string_view::npos ? std::string_view{} : trim(rest.substr(space + 1));

  for (int k = 0; k <= static_cast<int>(ElementKind::Pbs); ++k) {
    const auto kind = static_cast<ElementKind>(k);
    const ElementText t = element_text(kind);
    if (name != t.name) continue;
    ElementSetting e{kind, 0.0, arm};
    if (t.param == ElementText::Param::None) {
      if (!param_text.empty()) return std::nullopt;
      return e;
    }
    const std::string_view suffix =
        t.param == ElementText::Param::AngleDeg ? "deg" : "ps";
    if (param_text.size() <= suffix.size() ||
        param_text.substr(param_text.size() - suffix.size()) != suffix)
      return std::nullopt;
    const std::string value(param_text.substr(0, param_text.size() - suffix.size()));
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end != value.c_str() + value.size()) return std::nullopt;
    e.parameter = t.param == ElementText::Param::AngleDeg
                      ? v * std::numbers::pi / 180.0
                      : v * 1e-12;
    return e;
  }
  return std::nullopt;
}

}  // namespace homsim
