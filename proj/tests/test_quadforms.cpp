#include <catch2/catch_amalgamated.hpp>

#include "mtp/localfield.hpp"
#include "mtp/quadforms.hpp"

using namespace mtp;

namespace {
qf::QuadForm form(const LocalField& F, std::initializer_list<long> ds) {
  std::vector<FieldElement> v;
  for (long d : ds) v.push_back(FieldElement::from_int(F, d));
  return qf::QuadForm{&F, v};
}
}  // namespace

TEST_CASE("signed discriminant classes") {
  const auto& F3 = LocalField::base(3);
  REQUIRE(qf::disc_pm(form(F3, {1, -1})) == SquareClass::One);
  REQUIRE(qf::disc_pm(form(F3, {-6, 2, 3})) == SquareClass::One);  // -(-36)=36
  REQUIRE(qf::disc_pm(form(F3, {1})) == SquareClass::One);
  REQUIRE(qf::disc_pm(form(F3, {3})) == SquareClass::P);
  // (-1)^{4*3/2} = 1: plain product 1*1*1*2 = 2.
  REQUIRE(qf::disc_pm(form(F3, {1, 1, 1, 2})) == SquareClass::U);
}

TEST_CASE("Hasse invariants from pairwise symbols") {
  const auto& F3 = LocalField::base(3);
  const auto& F5 = LocalField::base(5);
  REQUIRE(qf::hasse(form(F3, {-6, 2, 3})) == -1);
  REQUIRE(qf::hasse(form(F3, {1, 1})) == 1);
  REQUIRE(qf::hasse(form(F5, {2, 5})) == -1);
  REQUIRE(qf::hasse(form(F5, {1})) == 1);
}

TEST_CASE("rank-one Weil indices at level zero") {
  // Classical quadratic Gauss sums: gamma(<1>) = 1 for p = 1 mod 4,
  // i for p = 3 mod 4; unit multipliers scale by the Legendre symbol.
  auto psi5 = AdditiveCharacter::standard(LocalField::base(5), 0);
  auto psi3 = AdditiveCharacter::standard(LocalField::base(3), 0);
  auto psi7 = AdditiveCharacter::standard(LocalField::base(7), 0);
  auto psi13 = AdditiveCharacter::standard(LocalField::base(13), 0);

  auto g = [](const AdditiveCharacter& psi, long t) {
    const auto& F = psi.field();
    return qf::weil_index(psi, qf::QuadForm{&F, {FieldElement::from_int(F, t)}});
  };

  REQUIRE(g(psi5, 1).is_one());
  REQUIRE(g(psi13, 1).is_one());
  REQUIRE(g(psi3, 1).equals(RootOfUnity::make(1, 4)));
  REQUIRE(g(psi7, 1).equals(RootOfUnity::make(1, 4)));
  REQUIRE(g(psi5, 2).equals(RootOfUnity::make(1, 2)));
  REQUIRE(g(psi3, 2).equals(RootOfUnity::make(3, 4)));  // -i
  // Odd valuation with r = 0 collapses to the trivial layer.
  REQUIRE(g(psi5, 5).is_one());
  REQUIRE(g(psi5, 10).is_one());
}

TEST_CASE("Weil index at level -1") {
  auto psi = AdditiveCharacter::standard(LocalField::base(5), -1);
  const auto& F5 = LocalField::base(5);
  auto one = qf::weil_index(psi, form(F5, {1}));
  REQUIRE(one.is_one());  // r integral, trivial layer
  auto gp = qf::weil_index(psi, form(F5, {5}));
  REQUIRE(gp.is_one());  // eps_5 = 1
  auto psi3 = AdditiveCharacter::standard(LocalField::base(3), -1);
  REQUIRE(qf::weil_index(psi3, form(LocalField::base(3), {3}))
              .equals(RootOfUnity::make(1, 4)));
}

TEST_CASE("hyperbolic planes have trivial Weil index") {
  for (long p : {3L, 5L, 7L}) {
    auto psi = AdditiveCharacter::standard(LocalField::base(p), 0);
    REQUIRE(qf::weil_index(psi, form(LocalField::base(p), {1, -1})).is_one());
    REQUIRE(qf::weil_index(psi, form(LocalField::base(p), {7, -7})).is_one());
  }
}

TEST_CASE("quadratic symbol from Weil index ratios") {
  // (a,b) = gamma(ab) gamma(1) / (gamma(a) gamma(b)), instance (2,5) at p=5.
  const auto& F5 = LocalField::base(5);
  auto psi = AdditiveCharacter::standard(F5, 0);
  auto g1 = [&](long t) {
    return qf::weil_index(psi, form(F5, {t}));
  };
  auto ratio = g1(10) * g1(1) * (g1(2) * g1(5)).inv();
  REQUIRE(ratio.equals(RootOfUnity::make(1, 2)));
}

TEST_CASE("ternary Hasse invariant matches the Weil-index product") {
  // eps(q) = gamma(q) gamma(1)^-2 gamma(disc_pm(q)) on <-6,2,3> over Q3.
  const auto& F3 = LocalField::base(3);
  auto psi = AdditiveCharacter::standard(F3, 0);
  auto q = form(F3, {-6, 2, 3});
  auto rhs = qf::weil_index(psi, q) *
             qf::weil_index(psi, form(F3, {1})).pow(-2) *
             qf::weil_index(psi, form(F3, {1}));  // disc_pm = 1
  REQUIRE(rhs.equals(RootOfUnity::from_sign(qf::hasse(q))));
}

TEST_CASE("Witt decomposition splits hyperbolic planes") {
  const auto& F3 = LocalField::base(3);
  const auto& F5 = LocalField::base(5);

  auto w1 = qf::witt_decompose(form(F3, {1, -1}));
  REQUIRE(w1.hyperbolic == 1);
  REQUIRE(w1.kernel.empty());

  auto w2 = qf::witt_decompose(form(F3, {1, 1}));
  REQUIRE(w2.hyperbolic == 0);
  REQUIRE(w2.kernel.size() == 2);

  auto w3 = qf::witt_decompose(form(F5, {1, 1}));  // -1 is a square mod 5
  REQUIRE(w3.hyperbolic == 1);
  REQUIRE(w3.kernel.empty());

  auto w4 = qf::witt_decompose(form(F3, {1, 1, 1}));
  REQUIRE(w4.hyperbolic == 1);
  REQUIRE(w4.kernel.size() == 1);
  REQUIRE(w4.kernel[0].square_class() == SquareClass::U);  // class of -1

  // The quaternion norm form is the unique anisotropic rank 4.
  auto w5 = qf::witt_decompose(form(F3, {1, -2, -3, 6}));
  REQUIRE(w5.hyperbolic == 0);
  REQUIRE(w5.kernel.size() == 4);

  auto w6 = qf::witt_decompose(form(F3, {1, 1, 1, 1, 1}));
  REQUIRE(2 * w6.hyperbolic + static_cast<int>(w6.kernel.size()) == 5);
  REQUIRE(w6.kernel.size() <= 3);

  // Invariants of H^w + kernel must reproduce the input's.
  for (auto* qq : {&w4, &w5, &w6}) {
    (void)qq;
  }
  auto orig = form(F3, {1, 1, 1, 1, 1});
  std::vector<FieldElement> rebuilt;
  for (int i = 0; i < w6.hyperbolic; i++) {
    rebuilt.push_back(FieldElement::from_int(F3, 1));
    rebuilt.push_back(FieldElement::from_int(F3, -1));
  }
  for (auto& e : w6.kernel) rebuilt.push_back(e);
  qf::QuadForm r{&F3, rebuilt};
  REQUIRE(qf::disc_pm(r) == qf::disc_pm(orig));
  REQUIRE(qf::hasse(r) == qf::hasse(orig));
}

TEST_CASE("isotropy criteria by rank") {
  const auto& F3 = LocalField::base(3);
  REQUIRE_FALSE(qf::is_isotropic(form(F3, {1, 1})));
  REQUIRE(qf::is_isotropic(form(F3, {1, -1})));
  REQUIRE(qf::is_isotropic(form(F3, {1, 1, 1})));
  REQUIRE_FALSE(qf::is_isotropic(form(F3, {1, -2, -3, 6})));
  REQUIRE(qf::is_isotropic(form(F3, {1, -2, -3, 6, 1})));
}
