#include <doctest.h>

#include <complex>
#include <map>
#include <utility>

#include "homsim/bell.hpp"
#include "homsim/random.hpp"
#include "homsim/state.hpp"

using namespace homsim;

namespace {

// Hand-rolled reference algebra on sparse index maps, kept deliberately free
// of the Eigen-based production path.
using RefVec = std::map<int, cxd>;
using RefMat = std::map<std::pair<int, int>, cxd>;

RefMat ref_tensor(const RefVec& a, const RefVec& b) {
  RefMat out;
  for (const auto& [i, x] : a)
    for (const auto& [j, y] : b) out[{i, j}] = x * y;
  return out;
}

RefMat ref_exchange(const RefMat& m) {
  RefMat out;
  for (const auto& [ij, x] : m) out[{ij.second, ij.first}] = x;
  return out;
}

cxd ref_inner(const RefMat& a, const RefMat& b) {
  cxd sum = 0.0;
  for (const auto& [ij, x] : a) {
    const auto it = b.find(ij);
    if (it != b.end()) sum += std::conj(x) * it->second;
  }
  return sum;
}

cxd ref_project(const RefMat& m, const RefVec& bra1, const RefVec& bra2) {
  cxd sum = 0.0;
  for (const auto& [ij, x] : m) {
    const auto it1 = bra1.find(ij.first);
    const auto it2 = bra2.find(ij.second);
    if (it1 != bra1.end() && it2 != bra2.end())
      sum += std::conj(it1->second) * x * std::conj(it2->second);
  }
  return sum;
}

RefVec to_ref(const HyperPhoton& s) {
  RefVec out;
  for (int i = 0; i < 4; ++i) {
    const cxd a = s.amplitudes()(i);
    if (a != cxd{}) out[i] = a;
  }
  return out;
}

RefMat to_ref(const HyperPair& s) {
  RefMat out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const cxd a = s.amplitudes()(i, j);
      if (a != cxd{}) out[{i, j}] = a;
    }
  return out;
}

HyperPhoton random_photon(RandomStream& rng) {
  HyperPhoton::Vector v;
  for (int i = 0; i < 4; ++i) v(i) = cxd(rng.normal(), rng.normal());
  return HyperPhoton(v).normalized();
}

HyperPair random_pair(RandomStream& rng) {
  HyperPair::Matrix m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = cxd(rng.normal(), rng.normal());
  return HyperPair(m).normalized();
}

constexpr InternalMode kHP{Polarization::H, OamSign::Plus};
constexpr InternalMode kHM{Polarization::H, OamSign::Minus};
constexpr InternalMode kVP{Polarization::V, OamSign::Plus};
constexpr InternalMode kVM{Polarization::V, OamSign::Minus};

}  // namespace

TEST_CASE("basis states are unit amplitudes in the canonical slots") {
  const auto photon = HyperPhoton::basis(kVP);
  CHECK(photon.amplitude(kVP) == cxd(1.0, 0.0));
  CHECK(photon.norm2() == doctest::Approx(1.0));

  const auto pair = HyperPair::basis(kHM, kVP);
  CHECK(pair.amplitude(kHM, kVP) == cxd(1.0, 0.0));
  CHECK(pair.amplitude(kVP, kHM) == cxd(0.0, 0.0));
}

TEST_CASE("normalization checks and normalized()") {
  HyperPhoton::Vector v = HyperPhoton::Vector::Zero();
  v(0) = cxd(3.0, 0.0);
  v(2) = cxd(0.0, 4.0);
  const HyperPhoton raw(v);
  CHECK_FALSE(raw.is_normalized());
  const HyperPhoton unit = raw.normalized();
  CHECK(unit.is_normalized());
  CHECK(unit.amplitude(kHP) == cxd(0.6, 0.0));
  CHECK(unit.amplitude(kVP) == cxd(0.0, 0.8));

  CHECK_THROWS_AS(HyperPhoton().normalized(), std::invalid_argument);
  CHECK_THROWS_AS(HyperPair().normalized(), std::invalid_argument);
}

TEST_CASE("tensor product of two superposed photons") {
  // (3/5)|H+> + (4i/5)|V+> on both photons.
  HyperPhoton::Vector v = HyperPhoton::Vector::Zero();
  v(ModeSpace<InternalMode>::index(kHP)) = cxd(0.6, 0.0);
  v(ModeSpace<InternalMode>::index(kVP)) = cxd(0.0, 0.8);
  const HyperPhoton photon{v};
  const HyperPair pair = tensor_product(photon, photon);

  CHECK(pair.amplitude(kHP, kHP).real() == doctest::Approx(0.36));
  CHECK(pair.amplitude(kHP, kVP).imag() == doctest::Approx(0.48));
  CHECK(pair.amplitude(kVP, kHP).imag() == doctest::Approx(0.48));
  // (4i/5)^2 = -0.64
  CHECK(pair.amplitude(kVP, kVP).real() == doctest::Approx(-0.64));
  CHECK(pair.amplitude(kVP, kVP).imag() == doctest::Approx(0.0));
  CHECK(pair.is_normalized());

  CHECK_THROWS_AS(tensor_product(HyperPhoton(), photon), std::invalid_argument);
}

TEST_CASE("tensor, exchange, inner and project agree with the sparse reference") {
  RandomStream rng(321, 0);
  for (int trial = 0; trial < 25; ++trial) {
    const HyperPhoton p1 = random_photon(rng);
    const HyperPhoton p2 = random_photon(rng);
    const HyperPair prod = tensor_product(p1, p2);
    const RefMat ref_prod = ref_tensor(to_ref(p1), to_ref(p2));
    for (const auto& [ij, x] : ref_prod) {
      const cxd got = prod.amplitudes()(ij.first, ij.second);
      CHECK(std::abs(got - x) < 1e-12);
    }

    const HyperPair s = random_pair(rng);
    const RefMat ref_s = to_ref(s);
    const HyperPair swapped = exchange(s);
    const RefMat ref_swapped = ref_exchange(ref_s);
    for (const auto& [ij, x] : ref_swapped)
      CHECK(std::abs(swapped.amplitudes()(ij.first, ij.second) - x) < 1e-12);

    const HyperPair t = random_pair(rng);
    CHECK(std::abs(inner_product(s, t) - ref_inner(ref_s, to_ref(t))) < 1e-12);

    const HyperPhoton b1 = random_photon(rng);
    const HyperPhoton b2 = random_photon(rng);
    CHECK(std::abs(project(s, b1, b2) -
                   ref_project(ref_s, to_ref(b1), to_ref(b2))) < 1e-12);
  }
}

TEST_CASE("exchange is an involution and preserves the norm") {
  RandomStream rng(5150, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const HyperPair s = random_pair(rng);
    const HyperPair twice = exchange(exchange(s));
    CHECK((twice.amplitudes() - s.amplitudes()).norm() < 1e-14);
    CHECK(exchange(s).norm2() == doctest::Approx(s.norm2()));
  }
}

TEST_CASE("exchanging a hyper Bell product negates exactly the Fermion-odd ones") {
  const HyperPair odd = hyper_state(PolBellLabel::PhiPlus, OamBellLabel::NuMinus);
  CHECK((exchange(odd).amplitudes() + odd.amplitudes()).norm() < 1e-15);

  const HyperPair even = hyper_state(PolBellLabel::PsiMinus, OamBellLabel::NuMinus);
  CHECK((exchange(even).amplitudes() - even.amplitudes()).norm() < 1e-15);
}

TEST_CASE("symmetry expectation is real, bounded, and zero on balanced mixes") {
  RandomStream rng(777, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const double s = symmetry_expectation(random_pair(rng));
    CHECK(s >= -1.0 - 1e-12);
    CHECK(s <= 1.0 + 1e-12);
  }

  // Equal superposition of one antisymmetric and one symmetric product.
  const HyperPair::Matrix balanced =
      (hyper_state(PolBellLabel::PsiMinus, OamBellLabel::NuPlus).amplitudes() +
       hyper_state(PolBellLabel::PsiPlus, OamBellLabel::NuPlus).amplitudes()) /
      std::sqrt(2.0);
  CHECK(symmetry_expectation(HyperPair(balanced)) == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(symmetry_expectation(HyperPair()), std::invalid_argument);
}

TEST_CASE("projection amplitudes of named states") {
  // <H,+m| <H,-m| (phi+ x nu+) = 1/2.
  const HyperPair state = hyper_state(PolBellLabel::PhiPlus, OamBellLabel::NuPlus);
  const cxd amp = project(state, HyperPhoton::basis(kHP), HyperPhoton::basis(kHM));
  CHECK(amp.real() == doctest::Approx(0.5));
  CHECK(amp.imag() == doctest::Approx(0.0));

  // The polarization singlet vanishes on any equal product projection.
  const PolPair singlet = polarization_bell(PolBellLabel::PsiMinus);
  PolPhoton::Vector d;
  d << cxd(1.0, 0.0), cxd(1.0, 0.0);
  const PolPhoton diag = PolPhoton(d).normalized();
  CHECK(std::abs(project(singlet, diag, diag)) < 1e-15);

  CHECK_THROWS_AS(project(state, HyperPhoton(), HyperPhoton::basis(kHM)),
                  std::invalid_argument);
}

TEST_CASE("fidelity ignores global phase and separates distinct states") {
  const HyperPair a = hyper_state(PolBellLabel::PhiPlus, OamBellLabel::MuPlus);
  const HyperPair rotated(a.amplitudes() * std::exp(cxd(0.0, 1.234)));
  CHECK(fidelity(a, rotated) == doctest::Approx(1.0).epsilon(1e-12));

  const HyperPair b = hyper_state(PolBellLabel::PhiMinus, OamBellLabel::MuPlus);
  CHECK(fidelity(a, b) == doctest::Approx(0.0).epsilon(1e-12));
}
