#pragma once

// Rank-one transfer factors on even-degree covers, and the genuine twofold
// character they compute when m = 2.
//
// A calibrated element (zeta s(delta), t0) in the plus sector determines
//
//   delta_plus = zeta * [gamma_psi(1)/gamma_psi(N(omega))] * (N(omega), -x(delta))_2
//
// where omega is any Hilbert-90 solution omega/tau(omega) = t0, x is the
// lower-left matrix entry (lower-right when that vanishes), and the gamma
// ratio only enters when m/2 is odd.  N(omega) moves by squares within the
// fiber, so the value is well defined.  The minus factor is the plus formula
// at the (-1)-translate of the lift: when 4 | m the input itself carries the
// minus sector; when m/2 is odd the minus-sector base over the same matrix
// is -t0, which is what omega must then solve, and a gamma_psi(1)^2
// prefactor appears.

#include <vector>

#include "mtp/common.hpp"
#include "mtp/cover.hpp"
#include "mtp/etale.hpp"
#include "mtp/localfield.hpp"
#include "mtp/quadforms.hpp"
#include "mtp/stabconj.hpp"
#include "mtp/symbols.hpp"

namespace mtp::transfer {

/// The unique block of a rank-one lift as a plain cover element.
inline cover::CoverElement rank_one(const cover::BlockCoverElement& t) {
  if (t.g.size() != 1) throw UnsupportedParameter("rank-one lifts only");
  return {t.g[0], t.zeta};
}

namespace detail {

inline RootOfUnity plus_value(const cover::CoverElement& t, const KElem& omega,
                              const AdditiveCharacter& psi) {
  const LocalField& F = psi.field();
  FieldElement N = omega.norm();
  FieldElement x = cover::bold_x(t.g);
  RootOfUnity v = t.zeta.as_root() *
                  RootOfUnity::from_sign(symbols::hilbert2(N, x.neg()));
  if (t.zeta.m() % 4 == 2)
    v = v * qf::gauss_gamma(psi, FieldElement::one(F)) *
        qf::gauss_gamma(psi, N).inv();
  return v;
}

inline void check_block(const stab::CalibratedElement& e,
                        const AdditiveCharacter& psi) {
  if (e.T.rank() != 1)
    throw UnsupportedParameter("transfer factors are defined at rank one");
  if (e.m() % 2 != 0) throw BadInput("transfer factors need an even degree");
  if (!psi.field().same(e.T.blocks[0].base()))
    throw BadInput("character lives over the wrong base field");
  KElem x = etale::iota(e.t0[0], e.m());
  if (e.sigma[0] < 0) x = x.neg();
  if (!stab::is_regular(e.T, {x}))
    throw NotRegular("projection of the base point is central");
}

inline void check_omega(const KElem& omega, const KElem& base) {
  if (!omega.is_invertible())
    throw BadInput("norm solution must be invertible");
  if (!omega.mul(omega.conj().inv()).equals(base))
    throw BadInput("norm solution does not solve the base point");
}

/// s(-1) * t on the same cover.
inline cover::CoverElement minus_shift(const cover::CoverElement& t) {
  const LocalField& F = t.g.a.field();
  auto s = cover::CoverElement::section(cover::GL2::scalar(F, -1), t.zeta.m());
  return s.mul(t);
}

inline KElem minus_base(const stab::CalibratedElement& e) {
  return e.m() % 4 == 2 ? e.t0[0].neg() : e.t0[0];
}

inline void check_minus_sector(const stab::CalibratedElement& e) {
  int want = (e.m() % 4 == 0) ? -1 : 1;
  if (e.sigma[0] != want)
    throw BadInput("wrong sector for the minus factor");
}

}  // namespace detail

/// Plus transfer factor with an explicit norm solution for t0.
inline RootOfUnity delta_plus(const AdditiveCharacter& psi,
                              const stab::CalibratedElement& e,
                              const KElem& omega) {
  detail::check_block(e, psi);
  if (e.sigma[0] != 1) throw BadInput("plus factor needs the plus sector");
  detail::check_omega(omega, e.t0[0]);
  return detail::plus_value(rank_one(e.lift), omega, psi);
}

inline RootOfUnity delta_plus(const AdditiveCharacter& psi,
                              const stab::CalibratedElement& e) {
  detail::check_block(e, psi);
  if (e.sigma[0] != 1) throw BadInput("plus factor needs the plus sector");
  return delta_plus(psi, e, etale::hilbert90_solve(e.t0[0]));
}

/// Minus transfer factor with an explicit norm solution for the minus-side
/// base point (-t0 when m/2 is odd, t0 itself when 4 | m).
inline RootOfUnity delta_minus(const AdditiveCharacter& psi,
                               const stab::CalibratedElement& e,
                               const KElem& omega) {
  detail::check_block(e, psi);
  detail::check_minus_sector(e);
  detail::check_omega(omega, detail::minus_base(e));
  RootOfUnity v =
      detail::plus_value(detail::minus_shift(rank_one(e.lift)), omega, psi);
  if (e.m() % 4 == 2) {
    RootOfUnity g1 = qf::gauss_gamma(psi, FieldElement::one(psi.field()));
    v = v * g1 * g1;
  }
  return v;
}

inline RootOfUnity delta_minus(const AdditiveCharacter& psi,
                               const stab::CalibratedElement& e) {
  detail::check_block(e, psi);
  detail::check_minus_sector(e);
  return delta_minus(psi, e, etale::hilbert90_solve(detail::minus_base(e)));
}

/// Genuine class function on the twofold cover of determinant-one elements:
/// zeta s(g) -> zeta gamma_psi(-c) gamma_psi(c (2 + tr g)) when c != 0.
/// Elements with vanishing lower-left entry are conjugated into the big cell
/// first; conjugation invariance makes the value independent of how.
inline RootOfUnity nabla_rank1(const AdditiveCharacter& psi,
                               const cover::CoverElement& t) {
  if (t.zeta.m() != 2) throw BadInput("the twofold character needs m = 2");
  const LocalField& F = t.g.a.field();
  if (!psi.field().same(F))
    throw BadInput("character lives over the wrong base field");
  if (!t.g.det().equals(FieldElement::one(F)))
    throw BadInput("the twofold character needs determinant one");
  FieldElement tr = t.g.a.add(t.g.d);
  FieldElement tp = tr.add(FieldElement::from_int(F, 2));
  if (tp.is_zero_like() || tr.add(FieldElement::from_int(F, -2)).is_zero_like())
    throw NotRegular("trace is +-2");

  auto eval = [&](const cover::CoverElement& u) {
    qf::QuadForm q{&F, {u.g.c.neg(), u.g.c.mul(tp)}};
    return u.zeta.as_root() * qf::weil_index(psi, q);
  };
  if (!t.g.c.is_zero_like()) return eval(t);
  auto fe = [&](long n) { return FieldElement::from_int(F, n); };
  const cover::GL2 hops[] = {{fe(0), fe(1), fe(-1), fe(0)},
                             {fe(1), fe(0), fe(1), fe(1)},
                             {fe(1), fe(0), fe(2), fe(1)}};
  for (const auto& h : hops) {
    cover::CoverElement u = t.conj_by(h);
    if (!u.g.c.is_zero_like()) return eval(u);
  }
  throw LowerLeftZero("no conjugate with an invertible lower-left entry");
}

/// Side-by-side evaluation of the twofold plus factor and the twofold
/// character on the same lift.
struct M2Report {
  RootOfUnity delta;
  RootOfUnity nabla;
  bool equal = false;
};

inline M2Report m2_compare(const AdditiveCharacter& psi,
                           const stab::CalibratedElement& e) {
  if (e.m() != 2) throw BadInput("comparison lives on the twofold cover");
  M2Report r{delta_plus(psi, e), nabla_rank1(psi, rank_one(e.lift)), false};
  r.equal = r.delta.equals(r.nabla);
  return r;
}

}  // namespace mtp::transfer
