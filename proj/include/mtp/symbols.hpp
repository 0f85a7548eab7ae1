#pragma once

// Tame Hilbert symbols of every degree m | q-1, the quadratic sign character
// of an etale algebra, chi_c characters, and the rational product-formula
// checker.  Everything reduces to the tame residue
//   t = (-1)^{v(a)v(b)} a^{v(b)} b^{-v(a)}  mod the maximal ideal,
// raised to (q-1)/m.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "mtp/common.hpp"
#include "mtp/etale.hpp"
#include "mtp/localfield.hpp"

namespace mtp::symbols {

inline ResElem tame_residue(const FieldElement& a, const FieldElement& b) {
  const LocalField& F = a.field();
  if (!F.same(b.field())) throw BadInput("symbol arguments in different fields");
  long va = a.valuation(), vb = b.valuation();
  ResElem ra = a.unit_part().residue();
  ResElem rb = b.unit_part().residue();
  ResElem t = res_mul(F, res_pow(F, ra, vb), res_pow(F, rb, -va));
  if ((va & 1) && (vb & 1))
    t = res_mul(F, t, ResElem{F.p() - 1, 0});  // times -1
  return res_canon(F, t);
}

inline MuM hilbert_m(const FieldElement& a, const FieldElement& b, long m) {
  const LocalField& F = a.field();
  long q = F.residue_q();
  if (m <= 0 || (q - 1) % m != 0)
    throw BadInput("hilbert_m needs m | q-1");
  ResElem t = tame_residue(a, b);
  ResElem s = res_pow(F, t, (q - 1) / m);
  return MuM::from_residue(F, s, m);
}

inline int hilbert2(const FieldElement& a, const FieldElement& b) {
  return hilbert_m(a, b, 2).is_one() ? 1 : -1;
}

/// Componentwise over split algebras, plain symbol of the quadratic field
/// otherwise.
inline MuM hilbert_m(const KElem& x, const KElem& y, long m) {
  const QuadEtale& K = x.algebra();
  if (!K.same(y.algebra())) throw BadInput("symbol arguments in different algebras");
  if (K.is_split())
    return hilbert_m(x.first(), y.first(), m) *
           hilbert_m(x.second(), y.second(), m);
  return hilbert_m(x.field_value(), y.field_value(), m);
}

inline int hilbert2(const KElem& x, const KElem& y) {
  return hilbert_m(x, y, 2).is_one() ? 1 : -1;
}

/// sgn_{K/F}: +1 on norms of K^x, -1 otherwise; identically +1 when split.
inline int sgn_quadratic(const QuadEtale& K, const FieldElement& x) {
  if (K.is_split()) return 1;
  return hilbert2(x, K.d_elem());
}

/// chi_c(x) = (x, c)_{F,2}; multiplicative in c.
inline int chi_c(const FieldElement& c, const FieldElement& x) {
  return hilbert2(x, c);
}

// ---------------------------------------------------------------------------
// Rational product formula: the symbols (a,b)_v over all places of Q multiply
// to +1.  Used as an external cross-check of the local tame values.

struct ProductFormulaReport {
  std::map<std::string, int> places;  // "real", "2", odd primes as strings
  int product = 1;
};

namespace detail {

inline long long vp_ll(long long& n, long long p) {
  long long v = 0;
  while (n % p == 0) { n /= p; v++; }
  return v;
}

inline int legendre_ll(long long a, long long p) {
  a %= p;
  if (a < 0) a += p;
  long long s = 1, b = a, e = (p - 1) / 2;
  while (e > 0) {
    if (e & 1) s = (s * b) % p;
    b = (b * b) % p;
    e >>= 1;
  }
  return s == 1 ? 1 : -1;
}

inline long long inv_mod_ll(long long a, long long p) {
  a %= p;
  if (a < 0) a += p;
  long long s = 1, b = a, e = p - 2;
  while (e > 0) {
    if (e & 1) s = (s * b) % p;
    b = (b * b) % p;
    e >>= 1;
  }
  return s;
}

inline int hilbert_odd_p(long long an, long long ad, long long bn,
                         long long bd, long long p) {
  long long va = 0, vb = 0;
  long long x;
  x = an; va += vp_ll(x, p); long long au = x % p;
  x = ad; va -= vp_ll(x, p); long long adu = x % p;
  x = bn; vb += vp_ll(x, p); long long bu = x % p;
  x = bd; vb -= vp_ll(x, p); long long bdu = x % p;
  long long a_unit = ((au % p) * inv_mod_ll(adu, p)) % p;
  long long b_unit = ((bu % p) * inv_mod_ll(bdu, p)) % p;
  // t = (-1)^{va vb} a_unit^{vb} b_unit^{-va}
  long long t = 1;
  auto powm = [&](long long base, long long e) {
    base %= p; if (base < 0) base += p;
    if (e < 0) { base = inv_mod_ll(base, p); e = -e; }
    long long r = 1;
    while (e > 0) {
      if (e & 1) r = (r * base) % p;
      base = (base * base) % p;
      e >>= 1;
    }
    return r;
  };
  t = (t * powm(a_unit, vb)) % p;
  t = (t * powm(b_unit, -va)) % p;
  if ((va & 1) && (vb & 1)) t = (t * (p - 1)) % p;
  return legendre_ll(t, p);
}

inline int eps4(long long x) {  // (x-1)/2 mod 2 for odd x
  long long r = ((x % 4) + 4) % 4;
  return r == 3 ? 1 : 0;
}

inline int omega8(long long x) {  // (x^2-1)/8 mod 2 for odd x
  long long r = ((x % 8) + 8) % 8;
  return (r == 3 || r == 5) ? 1 : 0;
}

inline int hilbert_two(long long an, long long ad, long long bn, long long bd) {
  long long x;
  long long va = 0, vb = 0;
  x = an; va += vp_ll(x, 2); long long ao = x;
  x = ad; va -= vp_ll(x, 2); ao *= 1; long long ado = x;
  x = bn; vb += vp_ll(x, 2); long long bo = x;
  x = bd; vb -= vp_ll(x, 2); long long bdo = x;
  // odd parts of a and b as signed odd integers (num * den works mod 8
  // because den^2 = 1 mod 8)
  long long aodd = ao * ado;
  long long bodd = bo * bdo;
  int e = eps4(aodd) * eps4(bodd);
  e += static_cast<int>(((va % 2) + 2) % 2) * omega8(bodd);
  e += static_cast<int>(((vb % 2) + 2) % 2) * omega8(aodd);
  return (e % 2 == 0) ? 1 : -1;
}

}  // namespace detail

inline ProductFormulaReport product_formula_check(long long an, long long ad,
                                                  long long bn, long long bd) {
  if (an == 0 || ad == 0 || bn == 0 || bd == 0)
    throw BadInput("product formula needs nonzero rationals");
  ProductFormulaReport rep;
  bool a_neg = (an < 0) != (ad < 0);
  bool b_neg = (bn < 0) != (bd < 0);
  rep.places["real"] = (a_neg && b_neg) ? -1 : 1;
  rep.places["2"] = detail::hilbert_two(an, ad, bn, bd);

  auto collect_odd = [](long long n, std::vector<long long>& out) {
    n = n < 0 ? -n : n;
    while (n % 2 == 0) n /= 2;
    for (long long p = 3; p * p <= n; p += 2)
      if (n % p == 0) {
        out.push_back(p);
        while (n % p == 0) n /= p;
      }
    if (n > 1) out.push_back(n);
  };
  std::vector<long long> primes;
  collect_odd(an, primes);
  collect_odd(ad, primes);
  collect_odd(bn, primes);
  collect_odd(bd, primes);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (long long p : primes)
    rep.places[std::to_string(p)] = detail::hilbert_odd_p(an, ad, bn, bd, p);

  rep.product = 1;
  for (auto& [_, s] : rep.places) rep.product *= s;
  return rep;
}

}  // namespace mtp::symbols
