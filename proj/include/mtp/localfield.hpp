#pragma once

// Exact bounded-precision arithmetic for Q_p (p odd) and its quadratic
// extensions, together with the exact circle-group types and additive
// characters used everywhere else.
//
// An element is pi^v * (a + b*theta) with the unit coordinates a, b tracked
// modulo p^k for a known digit count k.  theta is sqrt(u) for the unramified
// extension and the uniformizer pi (pi^2 = d) for the ramified ones; the base
// field has b = 0.  Operations propagate k conservatively: multiplication and
// inversion keep it, additive cancellation pays for every digit it destroys,
// and queries that would need unknown digits raise PrecisionExhausted.

#include <boost/integer/mod_inverse.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mtp/common.hpp"

namespace mtp {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt big_pow(long base, long e) {
  BigInt r = 1, b = base;
  for (; e > 0; e--) r *= b;
  return r;
}

inline BigInt mod_reduce(const BigInt& x, const BigInt& mod) {
  BigInt r = x % mod;
  if (r < 0) r += mod;
  return r;
}

inline BigInt mod_inv(const BigInt& x, const BigInt& mod) {
  BigInt r = boost::integer::mod_inverse(mod_reduce(x, mod), mod);
  if (r == 0) throw BadInput("element not invertible modulo p^k");
  return r;
}

enum class ExtKind { Base, Unram, RamP, RamUP };

constexpr int kDefaultPrec = 32;

/// Field configuration.  Instances are pooled and referenced by pointer, so
/// elements can compare fields by identity.
class LocalField {
 public:
  static const LocalField& base(long p, int prec = kDefaultPrec) {
    return pooled(p, ExtKind::Base, prec);
  }
  static const LocalField& ext(long p, ExtKind k, int prec = kDefaultPrec) {
    if (k == ExtKind::Base) return base(p, prec);
    return pooled(p, k, prec);
  }

  long p() const { return p_; }
  ExtKind kind() const { return kind_; }
  int prec() const { return prec_; }
  const BigInt& modulus() const { return modulus_; }

  int e() const { return (kind_ == ExtKind::RamP || kind_ == ExtKind::RamUP) ? 2 : 1; }
  int f() const { return kind_ == ExtKind::Unram ? 2 : 1; }
  long residue_q() const { return f() == 2 ? p_ * p_ : p_; }
  bool is_base() const { return kind_ == ExtKind::Base; }
  bool is_ramified() const { return e() == 2; }

  /// Smallest positive quadratic non-residue mod p.
  long nonresidue() const { return u_; }

  /// theta^2 as a plain integer (0 for the base field).
  long d_int() const {
    switch (kind_) {
      case ExtKind::Base:  return 0;
      case ExtKind::Unram: return u_;
      case ExtKind::RamP:  return p_;
      case ExtKind::RamUP: return u_ * p_;
    }
    return 0;
  }

  const LocalField& base_field() const { return base(p_, prec_); }

  bool same(const LocalField& o) const { return this == &o; }

 private:
  LocalField(long p, ExtKind k, int prec) : p_(p), kind_(k), prec_(prec) {
    if (p < 3 || p % 2 == 0) throw BadInput("p must be an odd prime");
    for (long x = 2; x < p; x++) {
      long r = 1;
      bool sq = false;
      for (long y = 1; y <= (p - 1) / 2; y++) {
        r = (y * y) % p;
        if (r == x % p) { sq = true; break; }
      }
      if (!sq) { u_ = x; break; }
    }
    modulus_ = big_pow(p, prec);
  }

  static const LocalField& pooled(long p, ExtKind k, int prec) {
    static std::map<std::tuple<long, int, int>, std::unique_ptr<LocalField>> pool;
    auto key = std::make_tuple(p, static_cast<int>(k), prec);
    auto it = pool.find(key);
    if (it == pool.end()) {
      it = pool.emplace(key, std::unique_ptr<LocalField>(
                                 new LocalField(p, k, prec))).first;
    }
    return *it->second;
  }

  long p_;
  ExtKind kind_;
  int prec_;
  long u_ = 0;
  BigInt modulus_;
};

/// Residue-field element: a + b*t with t^2 = u for f = 2, plain a for f = 1.
struct ResElem {
  long a = 0, b = 0;
  bool operator==(const ResElem&) const = default;
};

inline ResElem res_mul(const LocalField& F, ResElem x, ResElem y) {
  long p = F.p();
  if (F.f() == 1) return {((x.a % p) * (y.a % p)) % p, 0};
  long u = F.nonresidue();
  long a = ((x.a * y.a) % p + ((x.b * y.b) % p) * u) % p;
  long b = (x.a * y.b + x.b * y.a) % p;
  return {a, b};
}

inline bool res_is_zero(const LocalField& F, ResElem x) {
  long p = F.p();
  return x.a % p == 0 && (F.f() == 1 || x.b % p == 0);
}

inline ResElem res_pow(const LocalField& F, ResElem x, long e) {
  long q = F.residue_q();
  if (e < 0) {
    // x^{-1} = x^{q-2}
    e = ((-e) % (q - 1)) * (q - 2) % (q - 1);
  }
  e %= (q - 1);
  if (e < 0) e += q - 1;
  ResElem r{1, 0};
  ResElem b = x;
  while (e > 0) {
    if (e & 1) r = res_mul(F, r, b);
    b = res_mul(F, b, b);
    e >>= 1;
  }
  return r;
}

inline ResElem res_canon(const LocalField& F, ResElem x) {
  long p = F.p();
  long a = ((x.a % p) + p) % p;
  long b = F.f() == 2 ? ((x.b % p) + p) % p : 0;
  return {a, b};
}

inline long res_order(const LocalField& F, ResElem x) {
  x = res_canon(F, x);
  if (res_is_zero(F, x)) throw BadInput("order of zero residue");
  ResElem r = x;
  long n = 1;
  while (!(r.a == 1 && r.b == 0)) {
    r = res_canon(F, res_mul(F, r, x));
    n++;
    if (n > F.residue_q()) throw BadInput("residue order runaway");
  }
  return n;
}

class FieldElement;

/// Exact root of unity as a reduced rational angle a/b mod 1.
class RootOfUnity {
 public:
  RootOfUnity() : num_(0), den_(1) {}

  static RootOfUnity one() { return RootOfUnity(); }

  static RootOfUnity make(long long num, long long den) {
    if (den <= 0) throw BadInput("root of unity needs positive denominator");
    RootOfUnity r;
    r.num_ = num;
    r.den_ = den;
    r.reduce();
    return r;
  }

  static RootOfUnity from_sign(int s) {
    if (s == 1) return one();
    if (s == -1) return make(1, 2);
    throw BadInput("sign must be +-1");
  }

  RootOfUnity operator*(const RootOfUnity& o) const {
    long long g = std::gcd(den_, o.den_);
    long long l = den_ / g * o.den_;
    __int128 n = static_cast<__int128>(num_) * (l / den_) +
                 static_cast<__int128>(o.num_) * (l / o.den_);
    n %= l;
    if (n < 0) n += l;
    return make(static_cast<long long>(n), l);
  }

  RootOfUnity inv() const { return make(num_ == 0 ? 0 : den_ - num_, den_); }

  RootOfUnity pow(long long k) const {
    __int128 n = static_cast<__int128>(num_) * (k % den_);
    n %= den_;
    if (n < 0) n += den_;
    return make(static_cast<long long>(n), den_);
  }

  bool is_one() const { return num_ == 0; }
  bool equals(const RootOfUnity& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  long long order() const { return den_; }
  long long num() const { return num_; }
  long long den() const { return den_; }

  /// +-1 roots as ints; throws otherwise.
  int as_sign() const {
    if (is_one()) return 1;
    if (den_ == 2) return -1;
    throw BadInput("root of unity is not +-1");
  }
  bool is_real_sign() const { return den_ <= 2; }

  std::complex<double> to_complex() const {
    double t = 2.0 * 3.141592653589793238462643383279502884 *
               static_cast<double>(num_) / static_cast<double>(den_);
    return {std::cos(t), std::sin(t)};
  }

  std::string to_string() const {
    return "e(" + std::to_string(num_) + "/" + std::to_string(den_) + ")";
  }

 private:
  void reduce() {
    num_ %= den_;
    if (num_ < 0) num_ += den_;
    long long g = std::gcd(num_, den_);
    if (g > 1) { num_ /= g; den_ /= g; }
    if (num_ == 0) den_ = 1;
  }
  long long num_, den_;
};

/// Element of mu_m in exponent coordinates relative to the pinned generator
/// zeta_F (see MuM::generator).
class MuM {
 public:
  MuM(long m, long e) : m_(m), e_(((e % m) + m) % m) {
    if (m <= 0) throw BadInput("mu_m needs m >= 1");
  }

  static MuM identity(long m) { return MuM(m, 0); }

  long m() const { return m_; }
  long exp() const { return e_; }

  MuM operator*(const MuM& o) const {
    check(o);
    return MuM(m_, e_ + o.e_);
  }
  MuM inv() const { return MuM(m_, m_ - e_); }
  MuM pow(long k) const {
    long long e = (static_cast<long long>(e_) * (k % m_)) % m_;
    return MuM(m_, static_cast<long>(e));
  }
  bool is_one() const { return e_ == 0; }
  bool equals(const MuM& o) const { return m_ == o.m_ && e_ == o.e_; }
  RootOfUnity as_root() const { return RootOfUnity::make(e_, m_); }

  /// The pinned generator of the order-m subgroup of the residue field:
  /// the smallest positive integer whose residue has order exactly m, with a
  /// deterministic lexicographic fallback when no integer works (possible
  /// only over the quadratic residue field).
  static ResElem generator(const LocalField& F, long m);

  /// Discrete log of a unit known to lie in mu_m (by residue).
  static MuM from_unit(const LocalField& F, const FieldElement& x, long m);

  static MuM from_residue(const LocalField& F, ResElem r, long m) {
    ResElem z = generator(F, m);
    ResElem acc{1, 0};
    for (long j = 0; j < m; j++) {
      if (res_canon(F, acc) == res_canon(F, r)) return MuM(m, j);
      acc = res_canon(F, res_mul(F, acc, z));
    }
    throw BadInput("residue not in mu_m");
  }

 private:
  void check(const MuM& o) const {
    if (m_ != o.m_) throw BadInput("mu_m mismatch");
  }
  long m_, e_;
};

inline ResElem MuM::generator(const LocalField& F, long m) {
  long q = F.residue_q();
  if ((q - 1) % m != 0) throw BadInput("m does not divide q-1");
  if (m == 1) return {1, 0};
  long p = F.p();
  for (long k = 1; k < p; k++) {
    ResElem r{k % p, 0};
    if (!res_is_zero(F, r) && res_order(F, r) == m) return r;
  }
  if (F.f() == 2) {
    for (long k = p; k < q; k++) {
      ResElem r{k % p, k / p};
      if (!res_is_zero(F, r) && res_order(F, r) == m) return r;
    }
  }
  throw BadInput("no mu_m generator found");
}

/// pi^v * (a + b theta) with unit coordinates tracked mod p^dprec.
class FieldElement {
 public:
  // ---- constructors -------------------------------------------------------

  static FieldElement zero(const LocalField& F) {
    FieldElement x(F);
    x.exact_zero_ = true;
    x.zero_bound_ = 0;  // unused for exact zero
    return x;
  }

  static FieldElement one(const LocalField& F) { return from_int(F, 1); }

  static FieldElement from_int(const LocalField& F, long long n) {
    if (n == 0) return zero(F);
    FieldElement x(F);
    x.set_raw(0, BigInt(n), BigInt(0), F.prec());
    return x;
  }

  static FieldElement from_rational(const LocalField& F, long long num,
                                    long long den) {
    if (den == 0) throw BadInput("zero denominator");
    if (num == 0) return zero(F);
    return from_int(F, num).div(from_int(F, den));
  }

  static FieldElement from_bigint(const LocalField& F, const BigInt& n) {
    if (n == 0) return zero(F);
    FieldElement x(F);
    x.set_raw(0, n, BigInt(0), F.prec());
    return x;
  }

  /// theta: sqrt(u) in the unramified extension, the uniformizer pi in the
  /// ramified ones.
  static FieldElement theta(const LocalField& F) {
    if (F.is_base()) throw BadInput("base field has no theta");
    FieldElement x(F);
    x.set_raw(0, BigInt(0), BigInt(1), F.prec());
    return x;
  }

  /// a + b*theta for base-field coordinate values.
  static FieldElement from_parts(const LocalField& K, const FieldElement& a,
                                 const FieldElement& b) {
    return embed(K, a).add(embed(K, b).mul(theta(K)));
  }

  /// Embedding of the base field into K.  For the ramified pi^2 = up case,
  /// p^v = pi^{2v} u0^{-v}, so the coordinate picks up u0^{-v}.
  static FieldElement embed(const LocalField& K, const FieldElement& a) {
    if (!a.field().same(K.base_field()))
      throw BadInput("embed expects a base-field element");
    if (a.is_exact_zero()) return zero(K);
    if (a.is_zeroish()) {
      FieldElement x(K);
      x.zeroish_ = true;
      x.zero_bound_ = K.e() * a.zero_bound_;
      return x;
    }
    FieldElement x(K);
    BigInt coord = a.a_;
    long u0 = K.is_ramified() ? K.d_int() / K.p() : 1;
    if (u0 != 1 && a.v_ != 0) {
      BigInt mod = 1;
      for (int i = 0; i < a.dprec_; i++) mod *= K.p();
      BigInt step = a.v_ < 0 ? BigInt(u0) : mod_inv(BigInt(u0), mod);
      for (long i = 0; i < (a.v_ < 0 ? -a.v_ : a.v_); i++)
        coord = mod_reduce(coord * step, mod);
    }
    x.set_raw(K.e() * a.v_, coord, BigInt(0), a.dprec_);
    return x;
  }

  // ---- state --------------------------------------------------------------

  const LocalField& field() const { return *F_; }
  bool is_exact_zero() const { return exact_zero_; }
  bool is_zeroish() const { return zeroish_ && !exact_zero_; }
  bool is_zero_like() const { return exact_zero_ || zeroish_; }

  long valuation() const {
    if (exact_zero_) throw BadInput("valuation of exact zero");
    if (zeroish_)
      throw PrecisionExhausted("valuation of an element with no visible digits");
    return v_;
  }

  /// Lower bound on the valuation that holds even for zero-ish elements.
  long valuation_lower_bound() const {
    if (exact_zero_) return 1000000000L;
    if (zeroish_) return zero_bound_;
    return v_;
  }

  int precision() const {
    if (is_zero_like()) throw BadInput("precision of zero-like element");
    return dprec_;
  }

  FieldElement unit_part() const {
    FieldElement x = *this;
    x.v_ = 0;
    (void)valuation();  // force the error cases
    return x;
  }

  std::pair<long, FieldElement> valuation_unit() const {
    return {valuation(), unit_part()};
  }

  const BigInt& coord_a() const { return a_; }
  const BigInt& coord_b() const { return b_; }

  /// Residue coordinates of a unit (v = 0).
  ResElem residue() const {
    if (is_zero_like() || v_ != 0) throw BadInput("residue needs a unit");
    long p = F_->p();
    long a = static_cast<long>(a_ % p);
    long b = F_->f() == 2 ? static_cast<long>(b_ % p) : 0;
    return res_canon(*F_, {a, b});
  }

  long residue_a() const { return residue().a; }

  /// Base-field coordinates (A, B) with *this = A + B*theta.  Coordinates
  /// congruent to 0 within the precision window come back as exact zeros.
  std::pair<FieldElement, FieldElement> coord_elems() const {
    const LocalField& B0 = F_->is_base() ? *F_ : F_->base_field();
    if (is_zeroish())
      throw PrecisionExhausted("coordinates of a zero-ish element");
    if (exact_zero_) return {zero(B0), zero(B0)};
    if (F_->is_base()) return {*this, zero(B0)};
    auto lift = [&](const BigInt& c) {
      if (c == 0) return zero(B0);
      FieldElement y(B0);
      y.set_raw(0, c, BigInt(0), dprec_);
      return y;
    };
    // pi^2 acts on coordinates as d (= p, up, or u for the unramified case
    // where the step is just p itself).
    long step_int = F_->is_ramified() ? F_->d_int() : F_->p();
    auto scale = [&](FieldElement y, long w) {  // y * step^w
      if (y.is_exact_zero() || w == 0) return y;
      FieldElement sw = from_int(B0, step_int).pow(w >= 0 ? w : -w);
      return w >= 0 ? y.mul(sw) : y.div(sw);
    };
    if (!F_->is_ramified()) return {scale(lift(a_), v_), scale(lift(b_), v_)};
    if (v_ % 2 == 0) return {scale(lift(a_), v_ / 2), scale(lift(b_), v_ / 2)};
    // pi^v (a + b pi) = b d^{(v+1)/2} + a d^{(v-1)/2} pi
    long h = (v_ - 1) / 2;
    return {scale(lift(b_), h + 1), scale(lift(a_), h)};
  }

  // ---- arithmetic ---------------------------------------------------------

  FieldElement neg() const {
    if (exact_zero_) return *this;
    FieldElement x = *this;
    if (zeroish_) return x;
    x.a_ = mod_reduce(-a_, pk(dprec_));
    x.b_ = mod_reduce(-b_, pk(dprec_));
    return x;
  }

  FieldElement add(const FieldElement& o) const {
    check_field(o);
    if (exact_zero_) return o;
    if (o.exact_zero_) return *this;
    if (zeroish_ || o.zeroish_) {
      if (zeroish_ && o.zeroish_) {
        FieldElement x(*F_);
        x.zeroish_ = true;
        x.zero_bound_ = std::min(zero_bound_, o.zero_bound_);
        return x;
      }
      const FieldElement& z = zeroish_ ? *this : o;
      const FieldElement& y = zeroish_ ? o : *this;
      // y + (something in pi^bound): digits of y past the bound are fogged.
      if (z.zero_bound_ <= y.v_)
        throw PrecisionExhausted("adding a zero-ish element of unknown size");
      long certified = z.zero_bound_ - y.v_;  // pi-digits of y that survive
      int keep = static_cast<int>(
          std::min<long>(y.dprec_, certified / F_->e()));
      if (keep <= 0)
        throw PrecisionExhausted("adding a zero-ish element of unknown size");
      FieldElement x = y;
      x.truncate(keep);
      return x;
    }
    // Align to the smaller valuation and add coordinates.
    const FieldElement& lo = v_ <= o.v_ ? *this : o;
    const FieldElement& hi = v_ <= o.v_ ? o : *this;
    int k = std::min(dprec_, o.dprec_);
    BigInt A = lo.a_, B = lo.b_;
    auto [ha, hb] = hi.shifted_coords(hi.v_ - lo.v_, k);
    A += ha;
    B += hb;
    FieldElement x(*F_);
    x.set_raw(lo.v_, A, B, k);
    return x;
  }

  FieldElement sub(const FieldElement& o) const { return add(o.neg()); }

  FieldElement mul(const FieldElement& o) const {
    check_field(o);
    if (exact_zero_ || o.exact_zero_) return zero(*F_);
    if (zeroish_ || o.zeroish_) {
      FieldElement x(*F_);
      x.zeroish_ = true;
      long vb1 = zeroish_ ? zero_bound_ : v_;
      long vb2 = o.zeroish_ ? o.zero_bound_ : o.v_;
      x.zero_bound_ = vb1 + vb2;
      return x;
    }
    int k = std::min(dprec_, o.dprec_);
    BigInt mod = pk(k);
    auto [A, B] = unit_mul(a_, b_, o.a_, o.b_, mod);
    FieldElement x(*F_);
    x.set_raw(v_ + o.v_, A, B, k);
    return x;
  }

  FieldElement inv() const {
    if (exact_zero_) throw BadInput("inverse of zero");
    if (zeroish_) throw PrecisionExhausted("inverse of a zero-ish element");
    BigInt mod = pk(dprec_);
    FieldElement x(*F_);
    if (F_->is_base()) {
      x.set_raw(-v_, mod_inv(a_, mod), BigInt(0), dprec_);
      return x;
    }
    // (a + b theta)^{-1} = (a - b theta) / (a^2 - d b^2).
    BigInt d = theta_sq(mod);
    BigInt n = mod_reduce(a_ * a_ - d * b_ * b_, mod);
    BigInt ni = mod_inv(n, mod);
    x.set_raw(-v_, mod_reduce(a_ * ni, mod), mod_reduce(-b_ * ni, mod), dprec_);
    return x;
  }

  FieldElement div(const FieldElement& o) const { return mul(o.inv()); }

  FieldElement pow(long long k) const {
    if (k == 0) return one(*F_);
    FieldElement b = k > 0 ? *this : inv();
    unsigned long long e = k > 0 ? k : -k;
    FieldElement r = one(*F_);
    while (e > 0) {
      if (e & 1ull) r = r.mul(b);
      b = b.mul(b);
      e >>= 1;
    }
    return r;
  }

  /// Galois conjugate over the base field (identity on the base).
  FieldElement conj() const {
    if (F_->is_base() || is_zero_like()) return *this;
    FieldElement x = *this;
    BigInt mod = pk(dprec_);
    x.b_ = mod_reduce(-b_, mod);
    if (F_->is_ramified() && (v_ & 1)) {
      // tau(pi^v u) = (-1)^v pi^v tau(u)
      x.a_ = mod_reduce(-x.a_, mod);
      x.b_ = mod_reduce(-x.b_, mod);
    }
    return x;
  }

  FieldElement norm_to_base() const {
    if (F_->is_base()) return *this;
    return mul(conj()).to_base();
  }

  FieldElement trace_to_base() const {
    if (F_->is_base()) return mul(from_int(*F_, 2));
    return add(conj()).to_base();
  }

  /// Reinterprets an element of K with no theta component as an element of
  /// the base field.
  FieldElement to_base() const {
    const LocalField& B = F_->base_field();
    if (exact_zero_) return zero(B);
    if (zeroish_) {
      FieldElement x(B);
      x.zeroish_ = true;
      x.zero_bound_ = zero_bound_ / F_->e();
      return x;
    }
    if (b_ != 0) throw BadInput("element has a theta component");
    FieldElement x(B);
    if (!F_->is_ramified()) {
      x.set_raw(v_, a_, BigInt(0), dprec_);
      return x;
    }
    if (v_ & 1) throw BadInput("odd pi-valuation cannot live in the base");
    long s = v_ / 2;
    // pi^{2s} = d^s = p^s u0^s
    long u0 = F_->d_int() / F_->p();
    BigInt mod = pk(dprec_);
    BigInt a = a_;
    if (u0 != 1) {
      BigInt u0s = 1;
      BigInt step = s >= 0 ? BigInt(u0) : mod_inv(BigInt(u0), mod);
      for (long i = 0; i < (s >= 0 ? s : -s); i++)
        u0s = mod_reduce(u0s * step, mod);
      a = mod_reduce(a * u0s, mod);
    }
    x.set_raw(s, a, BigInt(0), dprec_);
    return x;
  }

  // ---- predicates ---------------------------------------------------------

  /// Equality to the common tracked precision.  Exact zeros compare equal to
  /// exact zeros only; zero-ish elements compare by their vanishing bound.
  bool equals(const FieldElement& o) const {
    check_field(o);
    if (exact_zero_ || o.exact_zero_)
      return is_zero_like() && o.is_zero_like();
    if (zeroish_ || o.zeroish_) return zeroish_ && o.zeroish_;
    if (v_ != o.v_) return false;
    int k = std::min(dprec_, o.dprec_);
    BigInt mod = pk(k);
    return mod_reduce(a_, mod) == mod_reduce(o.a_, mod) &&
           mod_reduce(b_, mod) == mod_reduce(o.b_, mod);
  }

  bool is_unit() const { return !is_zero_like() && v_ == 0; }

  /// Square class over the base field.
  SquareClass square_class() const {
    if (!F_->is_base()) throw BadInput("square classes are base-field only");
    long v = valuation();
    int leg = legendre_unit();
    if ((v & 1) == 0) return leg == 1 ? SquareClass::One : SquareClass::U;
    return leg == 1 ? SquareClass::P : SquareClass::UP;
  }

  bool is_square_class_trivial() const {
    return square_class() == SquareClass::One;
  }

  /// Legendre symbol of the unit part's residue (base or ramified field).
  int legendre_unit() const {
    ResElem r = unit_part().residue();
    long p = F_->p();
    if (F_->f() == 2) throw BadInput("legendre_unit is residue-prime only");
    long s = 1, b = r.a % p, e = (p - 1) / 2;
    while (e > 0) {
      if (e & 1) s = (s * b) % p;
      b = (b * b) % p;
      e >>= 1;
    }
    return s == 1 ? 1 : -1;
  }

  /// Teichmuller lift of the unit's residue: iterate x -> x^q to the fixed
  /// point.
  FieldElement teichmuller() const {
    if (!is_unit()) throw BadInput("teichmuller needs a unit");
    ResElem r = residue();
    FieldElement x(*F_);
    x.set_raw(0, BigInt(r.a), BigInt(r.b), F_->prec());
    long q = F_->residue_q();
    for (int i = 0; i <= F_->prec() + 2; i++) {
      FieldElement y = x.pow(q);
      if (y.equals(x)) return x;
      x = y;
    }
    throw BadInput("teichmuller iteration failed to stabilize");
  }

  std::string to_string() const {
    if (exact_zero_) return "0";
    if (zeroish_) return "O(pi^" + std::to_string(zero_bound_) + ")";
    std::string s = "pi^" + std::to_string(v_) + "*(" + a_.str();
    if (F_->f() == 2 || F_->is_ramified()) s += "+" + b_.str() + "th";
    return s + ")";
  }

 private:
  explicit FieldElement(const LocalField& F) : F_(&F) {}

  void check_field(const FieldElement& o) const {
    if (!F_->same(*o.F_)) throw BadInput("field mismatch");
  }

  BigInt pk(int k) const { return big_pow(F_->p(), k); }

  /// theta^2 mod p^k as an integer constant.
  BigInt theta_sq(const BigInt&) const { return BigInt(F_->d_int()); }

  std::pair<BigInt, BigInt> unit_mul(const BigInt& a1, const BigInt& b1,
                                     const BigInt& a2, const BigInt& b2,
                                     const BigInt& mod) const {
    if (F_->is_base()) return {mod_reduce(a1 * a2, mod), BigInt(0)};
    BigInt d = theta_sq(mod);
    BigInt A = mod_reduce(a1 * a2 + d * b1 * b2, mod);
    BigInt B = mod_reduce(a1 * b2 + b1 * a2, mod);
    return {A, B};
  }

  /// Coordinates of pi^shift * (a + b theta), reduced mod p^k.
  std::pair<BigInt, BigInt> shifted_coords(long shift, int k) const {
    BigInt mod = pk(k);
    BigInt A = a_, B = b_;
    if (!F_->is_ramified()) {
      BigInt f = 1;
      for (long i = 0; i < shift; i++) f *= F_->p();
      A = mod_reduce(A * f, mod);
      B = mod_reduce(B * f, mod);
      return {A, B};
    }
    BigInt d(F_->d_int());
    if (shift & 1) {
      // (a + b pi) * pi = (b d) + a pi
      BigInt A2 = mod_reduce(B * d, mod);
      BigInt B2 = A;
      A = A2;
      B = B2;
      shift -= 1;
    }
    BigInt f = 1;
    for (long i = 0; i < shift / 2; i++) f *= d;
    A = mod_reduce(A * f, mod);
    B = mod_reduce(B * f, mod);
    return {A, B};
  }

  void truncate(int k) {
    dprec_ = k;
    BigInt mod = pk(k);
    a_ = mod_reduce(a_, mod);
    b_ = mod_reduce(b_, mod);
  }

  /// Normalize raw coordinates at pi-valuation v0: factor out the pi-power
  /// of (A + B theta), paying precision for every removed digit.
  void set_raw(long v0, BigInt A, BigInt B, int k) {
    if (k <= 0) throw PrecisionExhausted("no digits left");
    BigInt mod = pk(k);
    A = mod_reduce(A, mod);
    B = mod_reduce(B, mod);
    long p = F_->p();
    if (A == 0 && B == 0) {
      zeroish_ = true;
      exact_zero_ = false;
      zero_bound_ = v0 + static_cast<long>(F_->e()) * k;
      return;
    }
    auto vp = [&](const BigInt& x) -> long {
      if (x == 0) return k;  // saturated
      BigInt y = x;
      long v = 0;
      while (y % p == 0) { y /= p; v++; }
      return v;
    };
    long t;  // pi-valuation of the unit-coordinate pair
    if (F_->is_base()) {
      t = vp(A);
    } else if (!F_->is_ramified()) {
      t = std::min(vp(A), vp(B));
    } else {
      t = std::min(2 * vp(A), 2 * vp(B) + 1);
    }
    if (t > 0) {
      const long t_total = t;
      long pdigits = (t + F_->e() - 1) / F_->e();  // p-digits destroyed
      if (k - pdigits <= 0) {
        zeroish_ = true;
        exact_zero_ = false;
        zero_bound_ = v0 + static_cast<long>(F_->e()) * k;
        return;
      }
      if (F_->is_ramified()) {
        if (t & 1) {
          // divide by pi once: (A + B pi)/pi = (A/d) pi ... = B + (A/p/u0) pi
          long u0 = F_->d_int() / p;
          BigInt An = A / p;
          if (u0 != 1) An = An * mod_inv(BigInt(u0), mod) % mod;
          BigInt tmp = B;
          B = mod_reduce(An, mod);
          A = tmp;
          t -= 1;
          // one p-digit gone from the old A
        }
        long s = t / 2;
        if (s > 0) {
          long u0 = F_->d_int() / p;
          BigInt u0inv = u0 == 1 ? BigInt(1) : mod_inv(BigInt(u0), mod);
          for (long i = 0; i < s; i++) {
            A = A / p;
            B = B / p;
            if (u0 != 1) {
              A = mod_reduce(A * u0inv, mod);
              B = mod_reduce(B * u0inv, mod);
            }
          }
        }
      } else {
        BigInt f = 1;
        for (long i = 0; i < t; i++) f *= p;
        A = A / f;
        B = B / f;
      }
      k -= pdigits;
      mod = pk(k);
      A = mod_reduce(A, mod);
      B = mod_reduce(B, mod);
      v0 += t_total;
    }
    v_ = v0;
    a_ = A;
    b_ = B;
    dprec_ = k;
    exact_zero_ = false;
    zeroish_ = false;
  }

  const LocalField* F_;
  bool exact_zero_ = false;
  bool zeroish_ = false;
  long zero_bound_ = 0;  // for zeroish: element lies in pi^bound * o
  long v_ = 0;
  BigInt a_ = 0, b_ = 0;
  int dprec_ = 0;
};

inline MuM MuM::from_unit(const LocalField& F, const FieldElement& x, long m) {
  return from_residue(F, x.unit_part().residue(), m);
}

/// psi(x) = psi_std(twist * x) evaluated through the trace for extensions.
/// The standard character of level l on the base is
/// psi_l(x) = exp(2 pi i {p^-(l+1) x}).
class AdditiveCharacter {
 public:
  static AdditiveCharacter standard(const LocalField& K, long level) {
    return AdditiveCharacter(K, level, FieldElement::one(K));
  }
  static AdditiveCharacter standard(const LocalField& K, long level,
                                    const FieldElement& twist) {
    return AdditiveCharacter(K, level, twist);
  }

  const LocalField& field() const { return *K_; }
  long base_level() const { return level_; }
  const FieldElement& twist() const { return twist_; }

  AdditiveCharacter twisted(const FieldElement& c) const {
    return AdditiveCharacter(*K_, level_, twist_.mul(c));
  }

  /// Level in the valuation of the owning field: largest l with the
  /// character nontrivial on pi^l o (trivial on pi^(l+1) o).
  long effective_level() const {
    return K_->e() * level_ - twist_.valuation();
  }

  RootOfUnity eval(const FieldElement& x) const {
    FieldElement y = twist_.mul(x);
    if (!K_->is_base()) y = y.trace_to_base();
    return eval_base(y);
  }

 private:
  AdditiveCharacter(const LocalField& K, long level, FieldElement twist)
      : K_(&K), level_(level), twist_(std::move(twist)) {
    if (twist_.is_zero_like()) throw BadInput("character twist must be nonzero");
  }

  RootOfUnity eval_base(const FieldElement& y) const {
    if (y.is_exact_zero()) return RootOfUnity::one();
    if (y.is_zeroish()) {
      if (y.valuation_lower_bound() >= level_ + 1) return RootOfUnity::one();
      throw PrecisionExhausted("character argument fogged near the level");
    }
    long v = y.valuation();
    long k = level_ + 1 - v;
    if (k <= 0) return RootOfUnity::one();
    if (y.precision() < k)
      throw PrecisionExhausted("not enough digits for the principal part");
    long p = y.field().p();
    BigInt mod = big_pow(p, k);
    if (mod > BigInt(1) << 62)
      throw BadInput("character order exceeds 2^62");
    BigInt r = mod_reduce(y.unit_part().coord_a(), mod);
    return RootOfUnity::make(static_cast<long long>(r),
                             static_cast<long long>(mod));
  }

  const LocalField* K_;
  long level_;
  FieldElement twist_;
};

}  // namespace mtp
