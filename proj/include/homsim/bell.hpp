#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "homsim/state.hpp"

namespace homsim {

enum class PolBellLabel : std::uint8_t { PhiPlus, PhiMinus, PsiPlus, PsiMinus };
enum class OamBellLabel : std::uint8_t { MuPlus, MuMinus, NuPlus, NuMinus };

struct HyperLabel {
  PolBellLabel pol;
  OamBellLabel oam;
};

constexpr bool operator==(HyperLabel a, HyperLabel b) {
  return a.pol == b.pol && a.oam == b.oam;
}

/// Exchange character of a single-DoF Bell state: Boson states return to
/// themselves under label swap, the Fermion ones acquire a minus sign.
enum class ExchangeTag : std::uint8_t { Boson, Fermion };

constexpr ExchangeTag tag_of(PolBellLabel l) {
  return l == PolBellLabel::PsiMinus ? ExchangeTag::Fermion : ExchangeTag::Boson;
}
constexpr ExchangeTag tag_of(OamBellLabel l) {
  return l == OamBellLabel::NuMinus ? ExchangeTag::Fermion : ExchangeTag::Boson;
}

struct SymmetryClass {
  enum class Kind : std::uint8_t { Symmetric, Antisymmetric, Mixed };
  Kind kind;
  double s;  // exchange expectation; +-1 for the eigenstate kinds

  static SymmetryClass symmetric() { return {Kind::Symmetric, 1.0}; }
  static SymmetryClass antisymmetric() { return {Kind::Antisymmetric, -1.0}; }
  static SymmetryClass mixed(double s) { return {Kind::Mixed, s}; }
};

constexpr bool operator==(SymmetryClass a, SymmetryClass b) {
  return a.kind == b.kind && (a.kind != SymmetryClass::Kind::Mixed || a.s == b.s);
}

PolPair polarization_bell(PolBellLabel label);

/// OAM Bell state on the +-m sign subspace. m enters element phases
/// elsewhere, not the amplitudes here; it is validated for range only.
OamPair oam_bell(OamBellLabel label, int m = 1);

HyperPair hyper_state(HyperLabel label);
inline HyperPair hyper_state(PolBellLabel pol, OamBellLabel oam) {
  return hyper_state(HyperLabel{pol, oam});
}

/// Decide Symmetric/Antisymmetric/Mixed by applying the label swap to the
/// amplitudes. Works for any mode dimension.
SymmetryClass classify_exchange_matrix(const Eigen::Ref<const Eigen::MatrixXcd>& amps);

template <ModeKind M>
SymmetryClass classify_exchange(const TwoPhotonState<M>& s) {
  if (!s.is_normalized())
    throw std::invalid_argument("classify_exchange requires a normalized state");
  return classify_exchange_matrix(Eigen::MatrixXcd(s.amplitudes()));
}

/// Symmetry of a multi-DoF Bell product from its per-DoF tags alone: an odd
/// number of Fermion factors makes the product antisymmetric.
SymmetryClass parity_rule(std::span<const ExchangeTag> tags);
SymmetryClass parity_rule(HyperLabel label);

std::array<PolBellLabel, 4> all_pol_labels();
std::array<OamBellLabel, 4> all_oam_labels();
std::array<HyperLabel, 16> all_hyper_labels();

std::string to_string(PolBellLabel l);   // "phi+", "phi-", "psi+", "psi-"
std::string to_string(OamBellLabel l);   // "mu+", "mu-", "nu+", "nu-"
std::string to_string(HyperLabel l);     // "phi+ x nu+"

std::optional<PolBellLabel> parse_pol_label(std::string_view text);
std::optional<OamBellLabel> parse_oam_label(std::string_view text);
std::optional<HyperLabel> parse_hyper_label(std::string_view text);

}  // namespace homsim
