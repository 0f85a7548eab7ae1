#pragma once

// Toral invariants of symmetric root orbits, the epsilon characters of the
// symplectic and odd orthogonal sides on 2-torsion points, the twofold
// character theta-dagger attached to a Lie-algebra parameter (y, c), and the
// moment-map quadratic space with its eigenvalue-matching check.
//
// A parameter is a block torus prod K_i^1 (quadratic etale algebras over the
// base field, with embedding data c_i = c_i' sqrt(D_i)) together with
// tau-antifixed elements y_i = y_i' sqrt(D_i).  Everything that matters
// reduces to quadratic symbols and rank-three forms
//   V_i = <-2 y_i c_i, 2 y_i c_i D_i> + <(-1)^n det Y>
// over the base field, where y_i c_i is the scalar y_i' c_i' D_i.

#include <cstddef>
#include <vector>

#include "mtp/common.hpp"
#include "mtp/etale.hpp"
#include "mtp/localfield.hpp"
#include "mtp/quadforms.hpp"
#include "mtp/rng.hpp"
#include "mtp/stabconj.hpp"
#include "mtp/symbols.hpp"

namespace mtp::packet {

// ---------------------------------------------------------------------------
// Parameters.

/// Torus data plus the tau-antifixed scalars y_i' (y_i = y_i' sqrt(D_i);
/// split blocks carry y_i = (y_i', -y_i')).
struct YParam {
  stab::TorusParam T;
  std::vector<FieldElement> yprime;

  size_t rank() const { return T.rank(); }

  FieldElement y_scalar(size_t i) const {
    if (i >= rank() || yprime.size() != rank())
      throw BadInput("y data must cover every block");
    if (yprime[i].is_zero_like()) throw BadInput("y data must be invertible");
    return yprime[i];
  }

  /// The scalar value of y_i c_i in the base field: y'c'D for a field block
  /// and y'c' for a split one.
  FieldElement yc_scalar(size_t i) const {
    FieldElement s = y_scalar(i).mul(T.c_scalar(i));
    if (!T.blocks[i].is_split()) s = s.mul(T.blocks[i].d_elem());
    return s;
  }

  /// N(y_i): -y'^2 D for a field block, -y'^2 split.
  FieldElement block_norm(size_t i) const {
    FieldElement s = y_scalar(i);
    FieldElement n = s.mul(s).neg();
    if (!T.blocks[i].is_split()) n = n.mul(T.blocks[i].d_elem());
    return n;
  }

  FieldElement det_y() const {
    FieldElement d = FieldElement::one(T.blocks.at(0).base());
    for (size_t i = 0; i < rank(); i++) d = d.mul(block_norm(i));
    return d;
  }

  /// (-1)^n det Y, the scalar completing the moment-map space.
  FieldElement signed_det() const {
    FieldElement d = det_y();
    return rank() % 2 == 1 ? d.neg() : d;
  }

  /// Regular: the 2n eigenvalues +-y_i are pairwise distinct.  Across
  /// distinct discriminant classes that is automatic; blocks sharing a class
  /// (or both split) must have y_i' != +-y_j'.
  bool regular() const {
    if (yprime.size() != rank()) return false;
    for (size_t i = 0; i < rank(); i++) {
      if (yprime[i].is_zero_like()) return false;
      for (size_t j = 0; j < i; j++) {
        bool same_kind = T.blocks[i].is_split() == T.blocks[j].is_split() &&
                         (T.blocks[i].is_split() ||
                          T.blocks[i].disc_class() == T.blocks[j].disc_class());
        if (!same_kind) continue;
        if (yprime[i].equals(yprime[j]) || yprime[i].equals(yprime[j].neg()))
          return false;
      }
    }
    return true;
  }
};

/// A 2-torsion point of the torus: one sign per block.
struct TorsionPoint {
  std::vector<int> sign;

  size_t rank() const { return sign.size(); }
};

// ---------------------------------------------------------------------------
// Root orbits.

enum class OrbitKind { SpLong, SpShortPair, SoShort, SoLongPair };

/// A Galois orbit class of roots relative to a block torus, named by the
/// block indices it involves.  Pairs are symmetric exactly when both blocks
/// are fields; single-index orbits when block i is a field.
struct RootOrbit {
  const stab::TorusParam* T = nullptr;
  OrbitKind kind = OrbitKind::SpLong;
  size_t i = 0;
  size_t j = 0;

  static RootOrbit sp_long(const stab::TorusParam& T, size_t i) {
    return make(T, OrbitKind::SpLong, i, i);
  }
  static RootOrbit sp_short_pair(const stab::TorusParam& T, size_t i,
                                 size_t j) {
    return make(T, OrbitKind::SpShortPair, i, j);
  }
  static RootOrbit so_short(const stab::TorusParam& T, size_t i) {
    return make(T, OrbitKind::SoShort, i, i);
  }
  static RootOrbit so_long_pair(const stab::TorusParam& T, size_t i,
                                size_t j) {
    return make(T, OrbitKind::SoLongPair, i, j);
  }

  bool is_pair() const {
    return kind == OrbitKind::SpShortPair || kind == OrbitKind::SoLongPair;
  }

  bool symmetric() const {
    if (T->blocks[i].is_split()) return false;
    if (is_pair() && T->blocks[j].is_split()) return false;
    return true;
  }

 private:
  static RootOrbit make(const stab::TorusParam& T, OrbitKind k, size_t i,
                        size_t j) {
    if (i >= T.rank() || j >= T.rank())
      throw BadInput("orbit block index out of range");
    RootOrbit o;
    o.T = &T;
    o.kind = k;
    o.i = i;
    o.j = j;
    if (o.is_pair() && i == j) throw BadInput("pair orbit needs i != j");
    return o;
  }
};

enum class Side { Sp, SO };

// ---------------------------------------------------------------------------
// Internals.

namespace detail {

inline void check_point(const stab::TorusParam& T, const TorsionPoint& g) {
  if (g.rank() != T.rank())
    throw BadInput("torsion point size must match the block count");
  for (int s : g.sign)
    if (s != 1 && s != -1) throw BadInput("torsion coordinates are +-1");
}

inline void check_same_torus(const stab::TorusParam& a,
                             const stab::TorusParam& b) {
  if (a.rank() != b.rank()) throw BadInput("orbit/parameter torus mismatch");
  for (size_t i = 0; i < a.rank(); i++)
    if (!a.blocks[i].same(b.blocks[i]))
      throw BadInput("orbit/parameter torus mismatch");
}

/// sgn_{F_a/F_{+-a}}(-1) for a symmetric pair orbit: over the base field
/// when the two discriminant classes agree, otherwise over the biquadratic
/// intermediate field E = F(sqrt(D_i D_j)).
inline int pair_invariant(const stab::TorusParam& T, size_t i, size_t j) {
  const QuadEtale& Ki = T.blocks[i];
  const QuadEtale& Kj = T.blocks[j];
  const LocalField& F = Ki.base();
  if (Ki.disc_class() == Kj.disc_class())
    return symbols::hilbert2(FieldElement::from_int(F, -1), Ki.d_elem());
  QuadEtale E = QuadEtale::field(F, Ki.disc_class() * Kj.disc_class());
  KElem m1 = KElem::from_int(E, -1);
  KElem di = KElem::from_parts(E, Ki.d_elem(), FieldElement::from_int(F, 0));
  return symbols::hilbert2(m1, di);
}

/// The rank-three space <-2yc, 2ycD, (-1)^n det Y> of a field block.
inline qf::QuadForm block_space(const YParam& Y, size_t i) {
  const LocalField& F = Y.T.blocks[i].base();
  FieldElement s = Y.yc_scalar(i);
  FieldElement two = FieldElement::from_int(F, 2);
  return qf::QuadForm{
      &F,
      {s.mul(two).neg(), s.mul(two).mul(Y.T.blocks[i].d_elem()),
       Y.signed_det()}};
}

/// Signed discriminant of a rank-r diagonal form as a field element.
inline FieldElement dpm_elem(const qf::QuadForm& q) {
  FieldElement d = FieldElement::one(*q.F);
  for (const auto& e : q.d) d = d.mul(e);
  size_t r = q.rank();
  return (r * (r - 1) / 2) % 2 == 1 ? d.neg() : d;
}

/// Block value by invariants: eps(V) * (-1, d_pm(V)).
inline int block_sign_hasse(const YParam& Y, size_t i) {
  qf::QuadForm V = block_space(Y, i);
  const LocalField& F = *V.F;
  return qf::hasse(V) *
         symbols::hilbert2(FieldElement::from_int(F, -1), dpm_elem(V));
}

/// Block value by Weil indices:
///   gamma(q0) gamma(a) gamma(1)^-2 gamma(D a) * (-1, D a)
/// with a = (-1)^n det Y.  The product of the gamma factors times the symbol
/// is +-1 for every character psi; the conversion asserts that.
inline int block_sign_weil(const YParam& Y, size_t i,
                           const AdditiveCharacter& psi) {
  const LocalField& F = Y.T.blocks[i].base();
  if (!psi.field().same(F))
    throw BadInput("character lives over the wrong field");
  FieldElement s = Y.yc_scalar(i);
  FieldElement two = FieldElement::from_int(F, 2);
  FieldElement a = Y.signed_det();
  FieldElement da = Y.T.blocks[i].d_elem().mul(a);
  qf::QuadForm q0{&F, {s.mul(two).neg(), s.mul(two).mul(Y.T.blocks[i].d_elem())}};
  RootOfUnity v = qf::weil_index(psi, q0) * qf::gauss_gamma(psi, a) *
                  qf::gauss_gamma(psi, FieldElement::one(F)).pow(2).inv() *
                  qf::gauss_gamma(psi, da);
  return v.as_sign() * symbols::hilbert2(FieldElement::from_int(F, -1), da);
}

inline void check_degree(long m) {
  if (m <= 0 || m % 4 != 2)
    throw UnsupportedParameter("the twofold character needs m = 2 mod 4");
}

inline void check_minus_blocks_are_fields(const YParam& Y,
                                          const TorsionPoint& g) {
  for (size_t i = 0; i < Y.rank(); i++)
    if (g.sign[i] == -1 && Y.T.blocks[i].is_split())
      throw UnsupportedParameter(
          "the character value at -1 needs a field block");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Toral invariants.

/// Invariant of a symmetric orbit class that does not need the y-datum.
inline int toral_invariant(const RootOrbit& o) {
  if (!o.symmetric())
    throw AsymmetricOrbit("toral invariant of a non-symmetric orbit");
  switch (o.kind) {
    case OrbitKind::SpLong:
      return 1;
    case OrbitKind::SpShortPair:
    case OrbitKind::SoLongPair:
      return detail::pair_invariant(*o.T, o.i, o.j);
    case OrbitKind::SoShort:
      throw BadInput("short orthogonal orbits need the y datum");
  }
  throw BadInput("bad orbit kind");
}

/// Invariant of a symmetric orbit class; short orthogonal orbits evaluate
/// the rank-three space of their block.
inline int toral_invariant(const RootOrbit& o, const YParam& Y) {
  detail::check_same_torus(*o.T, Y.T);
  if (o.kind != OrbitKind::SoShort) return toral_invariant(o);
  if (!o.symmetric())
    throw AsymmetricOrbit("toral invariant of a non-symmetric orbit");
  return detail::block_sign_hasse(Y, o.i);
}

// ---------------------------------------------------------------------------
// Epsilon characters.

/// Product of toral invariants over the symmetric orbit classes on which the
/// torsion point evaluates to -1.  A field pair with equal discriminant
/// classes underlies two orbit classes with a common invariant, so it
/// contributes a square; distinct classes give a single four-element orbit.
/// The orthogonal side additionally collects the short orbits of blocks
/// sitting at -1 and is restricted to anisotropic (all-field) tori.
inline int epsilon_char(Side side, const YParam& Y, const TorsionPoint& g0) {
  const stab::TorusParam& T = Y.T;
  detail::check_point(T, g0);
  if (side == Side::SO && !T.anisotropic())
    throw UnsupportedParameter(
        "the orthogonal epsilon character needs an anisotropic torus");
  int val = 1;
  for (size_t i = 0; i < T.rank(); i++) {
    if (T.blocks[i].is_split()) continue;
    for (size_t j = i + 1; j < T.rank(); j++) {
      if (T.blocks[j].is_split()) continue;
      if (g0.sign[i] * g0.sign[j] != -1) continue;
      int f = detail::pair_invariant(T, i, j);
      if (T.blocks[i].disc_class() == T.blocks[j].disc_class())
        val *= f * f;
      else
        val *= f;
    }
  }
  if (side == Side::SO)
    for (size_t i = 0; i < T.rank(); i++)
      if (g0.sign[i] == -1) val *= detail::block_sign_hasse(Y, i);
  return val;
}

// ---------------------------------------------------------------------------
// The twofold character.

/// Value at the torsion point by Hasse invariants of the block spaces.
inline int dagger_char(long m, const YParam& Y, const TorsionPoint& g0) {
  detail::check_degree(m);
  detail::check_point(Y.T, g0);
  detail::check_minus_blocks_are_fields(Y, g0);
  if (!Y.regular()) throw NotRegular("the parameter must be regular");
  int val = 1;
  for (size_t i = 0; i < Y.rank(); i++)
    if (g0.sign[i] == -1) val *= detail::block_sign_hasse(Y, i);
  return val;
}

/// Value at the torsion point by Weil indices for the given character.
inline int dagger_char(long m, const YParam& Y, const TorsionPoint& g0,
                       const AdditiveCharacter& psi) {
  detail::check_degree(m);
  detail::check_point(Y.T, g0);
  detail::check_minus_blocks_are_fields(Y, g0);
  if (!Y.regular()) throw NotRegular("the parameter must be regular");
  int val = 1;
  for (size_t i = 0; i < Y.rank(); i++)
    if (g0.sign[i] == -1) val *= detail::block_sign_weil(Y, i, psi);
  return val;
}

// ---------------------------------------------------------------------------
// Moment-map spaces.

/// The diagonalized rank 2n+1 space: each field block contributes
/// <-2yc, 2ycD>, each split block the hyperbolic plane <-2yc, 2yc>, and the
/// extra line carries (-1)^n det Y.  Its signed discriminant is trivial by
/// construction, which is asserted.
inline qf::QuadForm mm_space(const YParam& Y) {
  if (!Y.regular()) throw NotRegular("the parameter must be regular");
  const LocalField& F = Y.T.blocks.at(0).base();
  FieldElement two = FieldElement::from_int(F, 2);
  qf::QuadForm V{&F, {}};
  for (size_t i = 0; i < Y.rank(); i++) {
    FieldElement s = Y.yc_scalar(i);
    V.d.push_back(s.mul(two).neg());
    if (Y.T.blocks[i].is_split())
      V.d.push_back(s.mul(two));
    else
      V.d.push_back(s.mul(two).mul(Y.T.blocks[i].d_elem()));
  }
  V.d.push_back(Y.signed_det());
  if (qf::disc_pm(V) != SquareClass::One)
    throw BadInput("moment-map discriminant defect");
  return V;
}

namespace detail {

using Poly = std::vector<FieldElement>;
using Mat = std::vector<std::vector<FieldElement>>;

inline Poly poly_add(const LocalField& F, Poly a, const Poly& b) {
  if (b.size() > a.size()) a.resize(b.size(), FieldElement::from_int(F, 0));
  for (size_t k = 0; k < b.size(); k++) a[k] = a[k].add(b[k]);
  return a;
}

inline Poly poly_mul(const LocalField& F, const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, FieldElement::from_int(F, 0));
  for (size_t i = 0; i < a.size(); i++)
    for (size_t j = 0; j < b.size(); j++)
      r[i + j] = r[i + j].add(a[i].mul(b[j]));
  return r;
}

inline Poly poly_neg(Poly a) {
  for (auto& c : a) c = c.neg();
  return a;
}

/// Laplace expansion along the first row; the matrices here are at most
/// seven by seven, so no cleverness is warranted.
inline Poly det_poly(const LocalField& F,
                     const std::vector<std::vector<Poly>>& A) {
  size_t n = A.size();
  if (n == 1) return A[0][0];
  Poly acc{FieldElement::from_int(F, 0)};
  for (size_t k = 0; k < n; k++) {
    std::vector<std::vector<Poly>> minor;
    for (size_t r = 1; r < n; r++) {
      std::vector<Poly> row;
      for (size_t c = 0; c < n; c++)
        if (c != k) row.push_back(A[r][c]);
      minor.push_back(std::move(row));
    }
    Poly term = poly_mul(F, A[0][k], det_poly(F, minor));
    if (k % 2 == 1) term = poly_neg(std::move(term));
    acc = poly_add(F, std::move(acc), term);
  }
  return acc;
}

/// Monic characteristic polynomial det(x - M), ascending coefficients.
inline Poly char_poly(const LocalField& F, const Mat& M) {
  size_t n = M.size();
  std::vector<std::vector<Poly>> A(n, std::vector<Poly>(n));
  for (size_t i = 0; i < n; i++)
    for (size_t j = 0; j < n; j++) {
      A[i][j] = Poly{M[i][j].neg()};
      if (i == j) A[i][j].push_back(FieldElement::one(F));
    }
  return det_poly(F, A);
}

inline Mat zero_mat(const LocalField& F, size_t n) {
  return Mat(n, std::vector<FieldElement>(n, FieldElement::from_int(F, 0)));
}

inline Mat mat_mul(const LocalField& F, const Mat& A, const Mat& B) {
  size_t n = A.size();
  Mat C = zero_mat(F, n);
  for (size_t i = 0; i < n; i++)
    for (size_t k = 0; k < n; k++)
      for (size_t j = 0; j < n; j++)
        C[i][j] = C[i][j].add(A[i][k].mul(B[k][j]));
  return C;
}

inline Mat mat_transpose(const Mat& A) {
  Mat B = A;
  for (size_t i = 0; i < A.size(); i++)
    for (size_t j = 0; j < A.size(); j++) B[i][j] = A[j][i];
  return B;
}

inline bool mat_equal(const Mat& A, const Mat& B) {
  for (size_t i = 0; i < A.size(); i++)
    for (size_t j = 0; j < A.size(); j++)
      if (!A[i][j].equals(B[i][j])) return false;
  return true;
}

/// Multiplication matrix of y_i on its block in the coordinate basis.
inline void put_y_block(Mat& M, const YParam& Y, size_t i) {
  const QuadEtale& K = Y.T.blocks[i];
  FieldElement yp = Y.y_scalar(i);
  size_t o = 2 * i;
  if (K.is_split()) {
    M[o][o] = yp;
    M[o + 1][o + 1] = yp.neg();
  } else {
    M[o][o + 1] = yp.mul(K.d_elem());
    M[o + 1][o] = yp;
  }
}

/// Multiplication matrix of a torus element on its block.
inline void put_torus_block(Mat& M, const QuadEtale& K, const KElem& t,
                            size_t i) {
  size_t o = 2 * i;
  if (K.is_split()) {
    M[o][o] = t.first();
    M[o + 1][o + 1] = t.second();
  } else {
    auto [A, B] = t.field_value().coord_elems();
    M[o][o] = A;
    M[o][o + 1] = B.mul(K.d_elem());
    M[o + 1][o] = B;
    M[o + 1][o + 1] = A;
  }
}

/// Gram matrix of q<Y>(w) = <Yw|w> in the coordinate basis: per field block
/// diag(-2yc, 2ycD), per split block the off-diagonal pair -yc.
inline Mat gram_matrix(const LocalField& F, const YParam& Y) {
  Mat G = zero_mat(F, 2 * Y.rank());
  FieldElement two = FieldElement::from_int(F, 2);
  for (size_t i = 0; i < Y.rank(); i++) {
    FieldElement s = Y.yc_scalar(i);
    size_t o = 2 * i;
    if (Y.T.blocks[i].is_split()) {
      G[o][o + 1] = s.neg();
      G[o + 1][o] = s.neg();
    } else {
      G[o][o] = s.mul(two).neg();
      G[o + 1][o + 1] = s.mul(two).mul(Y.T.blocks[i].d_elem());
    }
  }
  return G;
}

}  // namespace detail

struct MMReport {
  bool char_match = false;
  bool isometry = false;
  /// Monic characteristic polynomial of Y on the 2n-dimensional space,
  /// ascending coefficients.
  detail::Poly char_y;
};

/// Mechanical eigenvalue-matching check: the characteristic polynomial of
/// the extended endomorphism on the 2n+1 space is x times that of Y, and
/// multiplication by torus elements preserves the form q<Y>.
inline MMReport mm_eigen_check(const YParam& Y, Rng& rng, int samples = 6) {
  if (!Y.regular()) throw NotRegular("the parameter must be regular");
  const LocalField& F = Y.T.blocks.at(0).base();
  size_t n = Y.rank();

  detail::Mat M = detail::zero_mat(F, 2 * n);
  for (size_t i = 0; i < n; i++) detail::put_y_block(M, Y, i);
  detail::Mat Mext = detail::zero_mat(F, 2 * n + 1);
  for (size_t i = 0; i < 2 * n; i++)
    for (size_t j = 0; j < 2 * n; j++) Mext[i][j] = M[i][j];

  MMReport rep;
  rep.char_y = detail::char_poly(F, M);
  detail::Poly cext = detail::char_poly(F, Mext);
  rep.char_match = cext.size() == rep.char_y.size() + 1;
  if (rep.char_match) {
    if (!cext[0].is_zero_like()) rep.char_match = false;
    for (size_t k = 0; k < rep.char_y.size() && rep.char_match; k++)
      if (!cext[k + 1].equals(rep.char_y[k])) rep.char_match = false;
  }

  detail::Mat G = detail::gram_matrix(F, Y);
  rep.isometry = true;
  for (int s = 0; s < samples && rep.isometry; s++) {
    detail::Mat T = detail::zero_mat(F, 2 * n);
    for (size_t i = 0; i < n; i++) {
      // The s = 0 round pins the 2-torsion action; later rounds sample.
      KElem t = s == 0 ? KElem::from_int(Y.T.blocks[i], -1)
                       : etale::k1_sample(Y.T.blocks[i], rng);
      detail::put_torus_block(T, Y.T.blocks[i], t, i);
    }
    detail::Mat TGT =
        detail::mat_mul(F, detail::mat_transpose(T), detail::mat_mul(F, G, T));
    if (!detail::mat_equal(TGT, G)) rep.isometry = false;
  }
  return rep;
}

}  // namespace mtp::packet
