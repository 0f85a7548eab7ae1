#include <catch2/catch_amalgamated.hpp>

#include "mtp/etale.hpp"
#include "mtp/localfield.hpp"
#include "mtp/symbols.hpp"

using namespace mtp;

namespace {
FieldElement fe(const LocalField& F, long n) {
  return FieldElement::from_int(F, n);
}
}  // namespace

// Frozen by hand from the tame formula
//   t = (-1)^{v(a)v(b)} a^{v(b)} b^{-v(a)} mod p,   (a,b) = t^{(q-1)/m}.

TEST_CASE("quadratic Hilbert symbols over Qp, pinned values") {
  const auto& F5 = LocalField::base(5);
  const auto& F3 = LocalField::base(3);

  REQUIRE(symbols::hilbert2(fe(F5, 2), fe(F5, 5)) == -1);  // t = 2, (2|5) = -1
  REQUIRE(symbols::hilbert2(fe(F3, 3), fe(F3, 3)) == -1);  // t = -1, (1|3)... (-1|3) = -1
  REQUIRE(symbols::hilbert2(fe(F5, 5), fe(F5, 5)) == 1);   // t = -1, (-1|5) = 1
  REQUIRE(symbols::hilbert2(fe(F5, 2), fe(F5, 3)) == 1);   // units pair trivially
  REQUIRE(symbols::hilbert2(fe(F3, -1), fe(F3, 3)) == -1);
  // Steinberg: (x, 1-x) = 1.
  REQUIRE(symbols::hilbert2(fe(F5, 10), fe(F5, -9)) == 1);
  REQUIRE(symbols::hilbert2(fe(F3, 3), fe(F3, -2)) == 1);
  // (x, -x) = 1.
  REQUIRE(symbols::hilbert2(fe(F5, 15), fe(F5, -15)) == 1);
}

TEST_CASE("degree-m symbols in exponent coordinates") {
  const auto& F5 = LocalField::base(5);
  // (5,5)_{5,4}: t = -1 = zeta4^2 with zeta4 = teich(2).
  auto s = symbols::hilbert_m(fe(F5, 5), fe(F5, 5), 4);
  REQUIRE(s.m() == 4);
  REQUIRE(s.exp() == 2);
  // (2,5)_{5,4}: t = 2 = zeta4^1.
  REQUIRE(symbols::hilbert_m(fe(F5, 2), fe(F5, 5), 4).exp() == 1);
  // m = 1 is the trivial group.
  REQUIRE(symbols::hilbert_m(fe(F5, 2), fe(F5, 5), 1).is_one());
  // m = 3 over Q7: (7,3)_{7,3}: t = 3^{-1} = 5, 5^2 = 4 = 2^... order check:
  // zeta3 = teich(2) (2 has order 3 mod 7); 5^2 = 25 = 4 = 2^2 -> exp 2.
  const auto& F7 = LocalField::base(7);
  REQUIRE(symbols::hilbert_m(fe(F7, 7), fe(F7, 3), 3).exp() == 2);
  // m must divide q-1.
  REQUIRE_THROWS_AS(symbols::hilbert_m(fe(F5, 2), fe(F5, 5), 3), BadInput);
}

TEST_CASE("bimultiplicativity and antisymmetry, pinned instances") {
  const auto& F7 = LocalField::base(7);
  auto a = fe(F7, 21), b = fe(F7, 2), c = fe(F7, 35);
  for (long m : {1L, 2L, 3L, 6L}) {
    auto ab_c = symbols::hilbert_m(a.mul(b), c, m);
    REQUIRE(ab_c.equals(symbols::hilbert_m(a, c, m) *
                        symbols::hilbert_m(b, c, m)));
    auto sym = symbols::hilbert_m(a, b, m) * symbols::hilbert_m(b, a, m);
    REQUIRE(sym.is_one());
  }
}

TEST_CASE("power compatibility between symbol depths") {
  // (x,y)_{F,m}^d = (x,y)_{F,m/d} embedded in roots of unity.
  const auto& F13 = LocalField::base(13);
  auto x = fe(F13, 26), y = fe(F13, 6);
  for (auto [m, d] : {std::pair<long, long>{4, 2}, {6, 2}, {6, 3}}) {
    auto lhs = symbols::hilbert_m(x, y, m).pow(d).as_root();
    auto rhs = symbols::hilbert_m(x, y, m / d).as_root();
    REQUIRE(lhs.equals(rhs));
  }
}

TEST_CASE("symbols over the unramified quadratic extension") {
  const auto& K = LocalField::ext(5, ExtKind::Unram);
  auto theta = FieldElement::theta(K);  // theta^2 = 2
  // (5, theta)_{K,2} = -1: t = theta^{-1}, and theta^{-12} = 2^{-6} = -1.
  REQUIRE(symbols::hilbert2(fe(K, 5), theta) == -1);
  // Projection formula instance: equals (5, N(theta))_{F,2} = (5,-2)_{F,2}.
  const auto& F5 = LocalField::base(5);
  REQUIRE(symbols::hilbert2(fe(F5, 5), fe(F5, -2)) == -1);
}

TEST_CASE("quadratic sign character of an etale algebra") {
  const auto& F3 = LocalField::base(3);
  auto K = QuadEtale::field(F3, SquareClass::P);  // Q3(sqrt 3)
  REQUIRE(symbols::sgn_quadratic(K, fe(F3, 2)) == -1);
  REQUIRE(symbols::sgn_quadratic(K, fe(F3, -2)) == 1);  // -2 = N(1 + sqrt3)
  auto S = QuadEtale::split(F3);
  REQUIRE(symbols::sgn_quadratic(S, fe(F3, 2)) == 1);
}

TEST_CASE("chi_c characters multiply in c") {
  const auto& F5 = LocalField::base(5);
  REQUIRE(symbols::chi_c(fe(F5, 5), fe(F5, 2)) == -1);
  auto c1 = fe(F5, 5), c2 = fe(F5, 2), x = fe(F5, 10);
  REQUIRE(symbols::chi_c(c1.mul(c2), x) ==
          symbols::chi_c(c1, x) * symbols::chi_c(c2, x));
}

TEST_CASE("rational Hilbert product formula, pinned instances") {
  auto r1 = symbols::product_formula_check(-1, 1, -1, 1);
  REQUIRE(r1.product == 1);
  REQUIRE(r1.places.at("real") == -1);
  REQUIRE(r1.places.at("2") == -1);

  auto r2 = symbols::product_formula_check(3, 1, 5, 1);
  REQUIRE(r2.product == 1);
  REQUIRE(r2.places.at("3") == -1);
  REQUIRE(r2.places.at("5") == -1);
  REQUIRE(r2.places.at("2") == 1);
  REQUIRE(r2.places.at("real") == 1);

  auto r3 = symbols::product_formula_check(2, 1, 3, 1);
  REQUIRE(r3.product == 1);
  REQUIRE(r3.places.at("2") == -1);
  REQUIRE(r3.places.at("3") == -1);

  // Rational entries with denominators.
  auto r4 = symbols::product_formula_check(-3, 4, 5, 9);
  REQUIRE(r4.product == 1);
}
