#include "homsim/bell.hpp"

#include <cmath>

namespace homsim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Pairwise amplitude pattern (a, b) on the two antidiagonal or diagonal
// slots of a 2x2 amplitude matrix.
Eigen::Matrix2cd diag_pattern(double sign) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = kInvSqrt2;
  m(1, 1) = sign * kInvSqrt2;
  return m;
}

Eigen::Matrix2cd antidiag_pattern(double sign) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 1) = kInvSqrt2;
  m(1, 0) = sign * kInvSqrt2;
  return m;
}

}  // namespace

PolPair polarization_bell(PolBellLabel label) {
  switch (label) {
    case PolBellLabel::PhiPlus:  return PolPair(diag_pattern(+1.0));
    case PolBellLabel::PhiMinus: return PolPair(diag_pattern(-1.0));
    case PolBellLabel::PsiPlus:  return PolPair(antidiag_pattern(+1.0));
    case PolBellLabel::PsiMinus: return PolPair(antidiag_pattern(-1.0));
  }
  throw std::invalid_argument("unknown polarization Bell label");
}

OamPair oam_bell(OamBellLabel label, int m) {
  validate_oam_order(m);
  switch (label) {
    case OamBellLabel::MuPlus:  return OamPair(diag_pattern(+1.0));
    case OamBellLabel::MuMinus: return OamPair(diag_pattern(-1.0));
    case OamBellLabel::NuPlus:  return OamPair(antidiag_pattern(+1.0));
    case OamBellLabel::NuMinus: return OamPair(antidiag_pattern(-1.0));
  }
  throw std::invalid_argument("unknown OAM Bell label");
}

HyperPair hyper_state(HyperLabel label) {
  const Eigen::Matrix2cd pol = polarization_bell(label.pol).amplitudes();
  const Eigen::Matrix2cd oam = oam_bell(label.oam).amplitudes();
  // Internal index is pol-major, so the joint amplitudes are the Kronecker
  // product of the per-DoF amplitude matrices.
  Eigen::Matrix4cd joint;
  for (int p1 = 0; p1 < 2; ++p1)
    for (int o1 = 0; o1 < 2; ++o1)
      for (int p2 = 0; p2 < 2; ++p2)
        for (int o2 = 0; o2 < 2; ++o2)
          joint(2 * p1 + o1, 2 * p2 + o2) = pol(p1, p2) * oam(o1, o2);
  return HyperPair(joint);
}

SymmetryClass classify_exchange_matrix(
    const Eigen::Ref<const Eigen::MatrixXcd>& amps) {
  const Eigen::MatrixXcd swapped = amps.transpose();
  if ((swapped - amps).norm() < kInputNormTol) return SymmetryClass::symmetric();
  if ((swapped + amps).norm() < kInputNormTol)
    return SymmetryClass::antisymmetric();
  const cxd s = (amps.conjugate().cwiseProduct(swapped)).sum();
  return SymmetryClass::mixed(s.real());
}

SymmetryClass parity_rule(std::span<const ExchangeTag> tags) {
  if (tags.empty())
    throw std::invalid_argument("parity_rule needs at least one DoF tag");
  int fermions = 0;
  for (ExchangeTag t : tags)
    if (t == ExchangeTag::Fermion) ++fermions;
  return (fermions % 2 == 0) ? SymmetryClass::symmetric()
                             : SymmetryClass::antisymmetric();
}

SymmetryClass parity_rule(HyperLabel label) {
  const std::array<ExchangeTag, 2> tags{tag_of(label.pol), tag_of(label.oam)};
  return parity_rule(std::span<const ExchangeTag>(tags));
}

std::array<PolBellLabel, 4> all_pol_labels() {
  return {PolBellLabel::PhiPlus, PolBellLabel::PhiMinus, PolBellLabel::PsiPlus,
          PolBellLabel::PsiMinus};
}

std::array<OamBellLabel, 4> all_oam_labels() {
  return {OamBellLabel::MuPlus, OamBellLabel::MuMinus, OamBellLabel::NuPlus,
          OamBellLabel::NuMinus};
}

std::array<HyperLabel, 16> all_hyper_labels() {
  std::array<HyperLabel, 16> out;
  int i = 0;
  for (PolBellLabel p : all_pol_labels())
    for (OamBellLabel o : all_oam_labels()) out[i++] = HyperLabel{p, o};
  return out;
}

std::string to_string(PolBellLabel l) {
  switch (l) {
    case PolBellLabel::PhiPlus:  return "phi+";
    case PolBellLabel::PhiMinus: return "phi-";
    case PolBellLabel::PsiPlus:  return "psi+";
    case PolBellLabel::PsiMinus: return "psi-";
  }
  return "?";
}

std::string to_string(OamBellLabel l) {
  switch (l) {
    case OamBellLabel::MuPlus:  return "mu+";
    case OamBellLabel::MuMinus: return "mu-";
    case OamBellLabel::NuPlus:  return "nu+";
    case OamBellLabel::NuMinus: return "nu-";
  }
  return "?";
}

std::string to_string(HyperLabel l) {
  return to_string(l.pol) + " x " + to_string(l.oam);
}

namespace {

std::string_view trimmed(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::optional<PolBellLabel> parse_pol_label(std::string_view text) {
  const std::string_view t = trimmed(text);
  for (PolBellLabel l : all_pol_labels())
    if (t == to_string(l)) return l;
  return std::nullopt;
}

std::optional<OamBellLabel> parse_oam_label(std::string_view text) {
  const std::string_view t = trimmed(text);
  for (OamBellLabel l : all_oam_labels())
    if (t == to_string(l)) return l;
  return std::nullopt;
}

std::optional<HyperLabel> parse_hyper_label(std::string_view text) {
  const std::string_view t = trimmed(text);
  const auto x = t.find(" x ");
  if (x == std::string_view::npos) return std::nullopt;
  const auto pol = parse_pol_label(t.substr(0, x));
  const auto oam = parse_oam_label(t.substr(x + 3));
  if (!pol || !oam) return std::nullopt;
  return HyperLabel{*pol, *oam};
}

}  // namespace homsim
