#include <catch2/catch_amalgamated.hpp>

#include "mtp/etale.hpp"
#include "mtp/localfield.hpp"
#include "mtp/rng.hpp"

using namespace mtp;

namespace {
FieldElement fe(const LocalField& F, long n) {
  return FieldElement::from_int(F, n);
}
}  // namespace

TEST_CASE("split algebra arithmetic") {
  const auto& F = LocalField::base(5);
  auto K = QuadEtale::split(F);
  auto z = KElem::from_parts(K, fe(F, 2), fe(F, 3));  // (5, -1)
  REQUIRE(z.first().equals(fe(F, 5)));
  REQUIRE(z.second().equals(fe(F, -1)));
  REQUIRE(z.norm().equals(fe(F, -5)));   // a^2 - b^2
  REQUIRE(z.trace().equals(fe(F, 4)));   // 2a
  REQUIRE(z.conj().first().equals(fe(F, -1)));
  auto sd = KElem::sqrt_d(K);
  REQUIRE(sd.mul(sd).equals(KElem::one(K)));  // D = 1 in the split case
  REQUIRE(z.mul(z.inv()).equals(KElem::one(K)));
}

TEST_CASE("quadratic field algebra arithmetic") {
  const auto& F = LocalField::base(3);
  auto K = QuadEtale::field(F, SquareClass::P);  // Q3(sqrt 3)
  auto sd = KElem::sqrt_d(K);
  REQUIRE(sd.norm().equals(fe(F, -3)));
  auto z = KElem::from_parts(K, fe(F, 2), fe(F, 1));  // 2 + pi
  REQUIRE(z.norm().equals(fe(F, 1)));                 // 4 - 3
  REQUIRE(z.trace().equals(fe(F, 4)));
  REQUIRE(z.mul(z.conj()).field_value().equals(FieldElement::one(K.ext())));
  REQUIRE_NOTHROW(NormOneElement(z));
  REQUIRE_THROWS_AS(NormOneElement(KElem::from_int(K, 2)), BadInput);  // N = 4
}

TEST_CASE("iota exponent and kernels") {
  REQUIRE(etale::iota_exponent(1) == 1);
  REQUIRE(etale::iota_exponent(2) == 1);
  REQUIRE(etale::iota_exponent(3) == 3);
  REQUIRE(etale::iota_exponent(4) == 2);
  REQUIRE(etale::iota_exponent(6) == 3);

  const auto& F7 = LocalField::base(7);
  auto Ks = QuadEtale::split(F7);
  // m = 6, m' = 3: kernel generated by (zeta3, zeta3^-1), zeta3 = teich(2).
  auto ker = etale::iota_kernel(Ks, 6);
  REQUIRE(ker.gens.size() == 1);
  auto g = ker.gens[0];
  REQUIRE(g.first().equals(fe(F7, 2).teichmuller()));
  REQUIRE(g.norm().equals(fe(F7, 1)));
  REQUIRE(etale::iota(g, 6).equals(KElem::one(Ks)));
  // m = 2 collapses to the trivial kernel.
  REQUIRE(etale::iota_kernel(Ks, 2).gens.empty());

  const auto& F5 = LocalField::base(5);
  auto Ku = QuadEtale::field(F5, SquareClass::U);
  auto k4 = etale::iota_kernel(Ku, 4);
  REQUIRE(k4.gens.size() == 1);
  REQUIRE(k4.gens[0].equals(KElem::from_int(Ku, -1)));
  REQUIRE(etale::iota(k4.gens[0], 4).equals(KElem::one(Ku)));
  REQUIRE(etale::iota_kernel(Ku, 6).gens.empty());
  REQUIRE(etale::iota_kernel(Ku, 2).gens.empty());
}

TEST_CASE("iota image membership, pinned values") {
  // Split Q7, m = 3: cubes in Q7^x need 3 | v and a cube residue ({1,6}).
  const auto& F7 = LocalField::base(7);
  auto Ks = QuadEtale::split(F7);
  auto pair = [&](const FieldElement& a) {
    return KElem::split_pair(Ks, a, a.inv());
  };
  REQUIRE_FALSE(etale::in_iota_image(pair(fe(F7, 7)), 3));
  REQUIRE(etale::in_iota_image(pair(fe(F7, 343)), 3));
  REQUIRE(etale::in_iota_image(pair(fe(F7, 1)), 3));
  REQUIRE_FALSE(etale::in_iota_image(pair(fe(F7, 2).teichmuller().mul(fe(F7, 343))), 3));
  REQUIRE(etale::in_iota_image(pair(fe(F7, 6).teichmuller().mul(fe(F7, 343))), 3));
  // m' = 1 is everything.
  REQUIRE(etale::in_iota_image(pair(fe(F7, 7)), 2));

  // Unramified field Q5(sqrt u): K^1 is cyclic of order 6, squares have
  // index 2, and -1 is not a square.
  const auto& F5 = LocalField::base(5);
  auto Ku = QuadEtale::field(F5, SquareClass::U);
  REQUIRE_FALSE(etale::in_iota_image(KElem::from_int(Ku, -1), 4));
  REQUIRE(etale::in_iota_image(KElem::from_int(Ku, 1), 4));
  Rng rng = Rng::for_stream(7, "etale-k1");
  for (int i = 0; i < 10; i++) {
    auto t = etale::k1_sample(Ku, rng);
    REQUIRE(etale::in_iota_image(t.mul(t), 4));
  }

  // Ramified Q3(sqrt 3): prime-to-p torsion of K^1 is {+-1}.
  auto Kr = QuadEtale::field(LocalField::base(3), SquareClass::P);
  REQUIRE_FALSE(etale::in_iota_image(KElem::from_int(Kr, -1), 4));
  REQUIRE(etale::in_iota_image(KElem::from_int(Kr, 1), 4));
  REQUIRE(etale::in_iota_image(KElem::from_int(Kr, -1), 6));  // m' odd
}

TEST_CASE("iota image symmetry under negation") {
  const auto& F5 = LocalField::base(5);
  auto Ks = QuadEtale::split(F5);
  auto Ku = QuadEtale::field(F5, SquareClass::U);
  REQUIRE(etale::iota_image_symmetric(Ks, 4));
  REQUIRE_FALSE(etale::iota_image_symmetric(Ku, 4));
  REQUIRE(etale::iota_image_symmetric(Ku, 2));
  REQUIRE(etale::iota_image_symmetric(Ku, 3));
  REQUIRE(etale::iota_image_symmetric(Ku, 6));
}

TEST_CASE("Hilbert 90 solutions") {
  const auto& F5 = LocalField::base(5);
  auto Ks = QuadEtale::split(F5);
  auto a = FieldElement::from_rational(F5, 4, 9);
  auto x0 = KElem::split_pair(Ks, a, a.inv());
  auto w = etale::hilbert90_solve(x0);
  REQUIRE(w.mul(w.conj().inv()).equals(x0));

  auto Ku = QuadEtale::field(F5, SquareClass::U);
  Rng rng = Rng::for_stream(11, "etale-h90");
  for (int i = 0; i < 10; i++) {
    auto t = etale::k1_sample(Ku, rng);
    auto wt = etale::hilbert90_solve(t);
    REQUIRE(wt.mul(wt.conj().inv()).equals(t));
  }

  // x0 = -1 needs the sqrt(D) branch; its norm class is the class of -D.
  auto Kr = QuadEtale::field(LocalField::base(3), SquareClass::P);
  auto wm = etale::hilbert90_solve(KElem::from_int(Kr, -1));
  REQUIRE(wm.mul(wm.conj().inv()).equals(KElem::from_int(Kr, -1)));
  REQUIRE(wm.norm().square_class() == SquareClass::UP);  // -3 over Q3
}

TEST_CASE("norm-one sampling across algebra kinds") {
  Rng rng = Rng::for_stream(13, "etale-sample");
  const auto& F7 = LocalField::base(7);
  std::vector<QuadEtale> algs = {
      QuadEtale::split(F7), QuadEtale::field(F7, SquareClass::U),
      QuadEtale::field(F7, SquareClass::P), QuadEtale::field(F7, SquareClass::UP)};
  for (const auto& K : algs) {
    for (int i = 0; i < 20; i++) {
      auto t = etale::k1_sample(K, rng);
      REQUIRE(t.is_invertible());
      REQUIRE(t.norm().equals(FieldElement::one(F7)));
      REQUIRE(t.mul(t.conj()).equals(KElem::one(K)));
    }
  }
}
