#pragma once

// Quadratic etale algebras K over the base field: either F x F with the
// coordinate swap, or the quadratic field F(sqrt D) for D in {u, p, up}.
// Provides norm-one elements, Hilbert-90 solutions, and the power maps
// iota: K^1 -> K^1, t -> t^(m / gcd(2,m)) together with their kernels.

#include <utility>
#include <vector>

#include "mtp/common.hpp"
#include "mtp/localfield.hpp"
#include "mtp/rng.hpp"

namespace mtp {

enum class EtaleKind { Split, Field };

class QuadEtale {
 public:
  static QuadEtale split(const LocalField& F) {
    QuadEtale K;
    K.kind_ = EtaleKind::Split;
    K.F_ = &F;
    K.ext_ = nullptr;
    K.D_ = SquareClass::One;
    return K;
  }

  static QuadEtale field(const LocalField& F, SquareClass D) {
    if (D == SquareClass::One)
      throw BadInput("quadratic field needs a nontrivial discriminant class");
    QuadEtale K;
    K.kind_ = EtaleKind::Field;
    K.F_ = &F;
    K.D_ = D;
    ExtKind ek = D == SquareClass::U    ? ExtKind::Unram
                 : D == SquareClass::P  ? ExtKind::RamP
                                        : ExtKind::RamUP;
    K.ext_ = &LocalField::ext(F.p(), ek, F.prec());
    return K;
  }

  EtaleKind kind() const { return kind_; }
  bool is_split() const { return kind_ == EtaleKind::Split; }
  const LocalField& base() const { return *F_; }
  const LocalField& ext() const {
    if (is_split()) throw BadInput("split algebra has no field extension");
    return *ext_;
  }
  SquareClass disc_class() const { return D_; }

  /// D as an element of the base field (1 for split).
  FieldElement d_elem() const {
    switch (D_) {
      case SquareClass::One: return FieldElement::one(*F_);
      case SquareClass::U:   return FieldElement::from_int(*F_, F_->nonresidue());
      case SquareClass::P:   return FieldElement::from_int(*F_, F_->p());
      case SquareClass::UP:
        return FieldElement::from_int(*F_, F_->nonresidue() * F_->p());
    }
    throw BadInput("bad discriminant class");
  }

  bool same(const QuadEtale& o) const {
    return kind_ == o.kind_ && F_->same(*o.F_) && D_ == o.D_;
  }

 private:
  QuadEtale() = default;
  EtaleKind kind_ = EtaleKind::Split;
  const LocalField* F_ = nullptr;
  const LocalField* ext_ = nullptr;
  SquareClass D_ = SquareClass::One;
};

/// Element of a quadratic etale algebra.
class KElem {
 public:
  static KElem split_pair(const QuadEtale& K, FieldElement x1, FieldElement x2) {
    if (!K.is_split()) throw BadInput("split_pair on a field algebra");
    KElem z(K);
    z.x1_ = std::move(x1);
    z.x2_ = std::move(x2);
    return z;
  }

  static KElem of_field(const QuadEtale& K, FieldElement x) {
    if (K.is_split()) throw BadInput("of_field on a split algebra");
    if (!x.field().same(K.ext())) throw BadInput("element/field mismatch");
    KElem z(K);
    z.x1_ = std::move(x);
    return z;
  }

  /// a + b*sqrtD with base-field coordinates; for the split algebra sqrtD
  /// means (1,-1), so this is (a+b, a-b).
  static KElem from_parts(const QuadEtale& K, const FieldElement& a,
                          const FieldElement& b) {
    if (K.is_split()) return split_pair(K, a.add(b), a.sub(b));
    return of_field(K, FieldElement::from_parts(K.ext(), a, b));
  }

  static KElem from_int(const QuadEtale& K, long long n) {
    if (K.is_split())
      return split_pair(K, FieldElement::from_int(K.base(), n),
                        FieldElement::from_int(K.base(), n));
    return of_field(K, FieldElement::from_int(K.ext(), n));
  }

  static KElem one(const QuadEtale& K) { return from_int(K, 1); }

  /// sqrt(D) itself: theta for fields, (1,-1) split.
  static KElem sqrt_d(const QuadEtale& K) {
    if (K.is_split())
      return split_pair(K, FieldElement::one(K.base()),
                        FieldElement::from_int(K.base(), -1));
    return of_field(K, FieldElement::theta(K.ext()));
  }

  const QuadEtale& algebra() const { return K_; }
  const FieldElement& first() const { return x1_; }
  const FieldElement& second() const {
    if (!K_.is_split()) throw BadInput("field element has one coordinate");
    return x2_;
  }
  const FieldElement& field_value() const {
    if (K_.is_split()) throw BadInput("split element has two coordinates");
    return x1_;
  }

  bool is_zero_like() const {
    if (K_.is_split()) return x1_.is_zero_like() || x2_.is_zero_like();
    return x1_.is_zero_like();
  }

  bool is_invertible() const {
    if (K_.is_split())
      return !x1_.is_zero_like() && !x2_.is_zero_like();
    return !x1_.is_zero_like();
  }

  KElem mul(const KElem& o) const {
    check(o);
    if (K_.is_split()) return split_pair(K_, x1_.mul(o.x1_), x2_.mul(o.x2_));
    return of_field(K_, x1_.mul(o.x1_));
  }

  KElem add(const KElem& o) const {
    check(o);
    if (K_.is_split()) return split_pair(K_, x1_.add(o.x1_), x2_.add(o.x2_));
    return of_field(K_, x1_.add(o.x1_));
  }

  KElem neg() const {
    if (K_.is_split()) return split_pair(K_, x1_.neg(), x2_.neg());
    return of_field(K_, x1_.neg());
  }

  KElem inv() const {
    if (K_.is_split()) return split_pair(K_, x1_.inv(), x2_.inv());
    return of_field(K_, x1_.inv());
  }

  KElem conj() const {
    if (K_.is_split()) return split_pair(K_, x2_, x1_);
    return of_field(K_, x1_.conj());
  }

  KElem pow(long long k) const {
    if (K_.is_split()) return split_pair(K_, x1_.pow(k), x2_.pow(k));
    return of_field(K_, x1_.pow(k));
  }

  FieldElement norm() const {
    if (K_.is_split()) return x1_.mul(x2_);
    return x1_.norm_to_base();
  }

  FieldElement trace() const {
    if (K_.is_split()) return x1_.add(x2_);
    return x1_.trace_to_base();
  }

  bool equals(const KElem& o) const {
    check(o);
    if (K_.is_split()) return x1_.equals(o.x1_) && x2_.equals(o.x2_);
    return x1_.equals(o.x1_);
  }

  std::string to_string() const {
    if (K_.is_split()) return "(" + x1_.to_string() + "," + x2_.to_string() + ")";
    return x1_.to_string();
  }

 private:
  explicit KElem(const QuadEtale& K)
      : K_(K),
        x1_(FieldElement::zero(K.is_split() ? K.base() : K.ext())),
        x2_(FieldElement::zero(K.base())) {}

  void check(const KElem& o) const {
    if (!K_.same(o.K_)) throw BadInput("etale algebra mismatch");
  }

  QuadEtale K_;
  FieldElement x1_, x2_;
};

/// Checked norm-one wrapper.
class NormOneElement {
 public:
  explicit NormOneElement(KElem x) : x_(std::move(x)) {
    FieldElement n = x_.norm();
    FieldElement one = FieldElement::one(n.field());
    if (!n.is_zero_like() && !n.equals(one))
      throw BadInput("element does not have norm one");
    if (n.is_zero_like()) throw BadInput("norm-one check on zero-like element");
  }

  const KElem& value() const { return x_; }

 private:
  KElem x_;
};

namespace etale {

inline long iota_exponent(long m) { return m % 2 == 0 ? m / 2 : m; }

/// t -> t^(m/gcd(2,m)) on norm-one elements.
inline KElem iota(const KElem& t, long m) { return t.pow(iota_exponent(m)); }

struct IotaKernel {
  std::vector<KElem> gens;  // generators of ker(iota) in K^1
};

inline IotaKernel iota_kernel(const QuadEtale& K, long m) {
  long mp = iota_exponent(m);
  IotaKernel ker;
  if (mp == 1) return ker;
  if (K.is_split()) {
    // mu_{m'} embedded antidiagonally.
    const LocalField& F = K.base();
    if ((F.p() - 1) % mp != 0)
      throw BadInput("iota kernel needs m' | p-1 on split algebras");
    ResElem g = MuM::generator(F, mp);
    FieldElement z = FieldElement::from_int(F, g.a).teichmuller();
    ker.gens.push_back(KElem::split_pair(K, z, z.inv()));
    return ker;
  }
  if (m % 4 == 0) ker.gens.push_back(KElem::from_int(K, -1));
  return ker;
}

/// Membership of x in (K^1)^{m'}: prime-to-p torsion is the only obstruction.
inline bool in_iota_image(const KElem& x, long m) {
  long mp = iota_exponent(m);
  if (mp == 1) return true;
  const QuadEtale& K = x.algebra();
  long p = K.base().p();
  if (K.is_split()) {
    const FieldElement& a = x.first();
    long v = a.valuation();
    if (((v % mp) + mp) % mp != 0) return false;
    long g = std::gcd(mp, p - 1);
    ResElem r = a.unit_part().residue();
    ResElem s = res_pow(K.base(), r, (p - 1) / g);
    return res_canon(K.base(), s) == ResElem{1, 0};
  }
  const LocalField& E = K.ext();
  ResElem r = x.field_value().unit_part().residue();
  if (E.f() == 2) {
    long g = std::gcd(mp, p + 1);
    ResElem s = res_pow(E, r, (p + 1) / g);
    return res_canon(E, s) == ResElem{1, 0};
  }
  // Ramified: prime-to-p torsion of K^1 is {+-1}.
  if (mp % 2 != 0) return true;
  return res_canon(E, r) == ResElem{1, 0};
}

/// Whether im(iota) = -im(iota): true unless 4 | m on a field algebra.
inline bool iota_image_symmetric(const QuadEtale& K, long m) {
  return K.is_split() || m % 4 != 0;
}

/// omega with omega / tau(omega) = x0 (norm-one x0).  Unique up to F^x, so
/// N(omega) is well-defined modulo squares.
inline KElem hilbert90_solve(const KElem& x0) {
  const QuadEtale& K = x0.algebra();
  if (K.is_split()) {
    // x0 = (a, a^-1): omega = (a, 1).
    return KElem::split_pair(K, x0.first(), FieldElement::one(K.base()));
  }
  KElem minus_one = KElem::from_int(K, -1);
  if (x0.equals(minus_one)) return KElem::sqrt_d(K);
  KElem w = KElem::one(K).add(x0);
  if (!w.is_invertible())
    throw PrecisionExhausted("Hilbert-90 pivot vanished to precision");
  return w;
}

/// Random norm-one element via omega / tau(omega).
inline KElem k1_sample(const QuadEtale& K, Rng& rng) {
  const LocalField& F = K.base();
  for (int tries = 0; tries < 64; tries++) {
    FieldElement a = FieldElement::from_int(F, rng.nonzero(3 * F.p()));
    FieldElement b = FieldElement::from_int(F, rng.uniform(-3 * F.p(), 3 * F.p()));
    KElem w = KElem::from_parts(K, a, b);
    if (!w.is_invertible() || !w.conj().is_invertible()) continue;
    if (w.norm().is_zero_like()) continue;
    return w.mul(w.conj().inv());
  }
  throw BadInput("failed to sample a norm-one element");
}

}  // namespace etale
}  // namespace mtp
