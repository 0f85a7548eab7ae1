#pragma once

// Calibrated stable conjugacy on block covers.  A maximal torus is a product
// of norm-one groups K_i^1 of quadratic etale algebras over the base field.
// A calibrated element pairs a lift (block matrices plus one mu_m kernel)
// with base points t0_i whose images sigma_i * t0_i^{m/gcd(2,m)} the matrices
// realize.  Conjugating by PGL(2) blocks multiplies the kernel by the
// calibration sign (N(omega_i), det g_i)_{F,2}; that correction is what makes
// the map depend only on the induced torus isomorphism.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "mtp/common.hpp"
#include "mtp/cover.hpp"
#include "mtp/etale.hpp"
#include "mtp/localfield.hpp"
#include "mtp/symbols.hpp"

namespace mtp::stab {

struct TorusParam {
  std::vector<QuadEtale> blocks;
  /// Scalars c_i' of the embedding data c_i = c_i' * sqrt(D_i) (split blocks:
  /// c_i = (c_i', -c_i')).  Empty means every c_i' = 1.
  std::vector<FieldElement> cprime;

  size_t rank() const { return blocks.size(); }

  bool anisotropic() const {
    for (const auto& K : blocks)
      if (K.is_split()) return false;
    return true;
  }

  FieldElement c_scalar(size_t i) const {
    if (i >= rank()) throw BadInput("block index out of range");
    if (cprime.empty()) return FieldElement::one(blocks[i].base());
    if (cprime.size() != rank())
      throw BadInput("c data must cover every block");
    if (cprime[i].is_zero_like())
      throw BadInput("c data must be invertible");
    return cprime[i];
  }

  /// c_i as an element of K_i; tau(c_i) = -c_i by construction.
  KElem c_elem(size_t i) const {
    const QuadEtale& K = blocks[i];
    FieldElement cp = c_scalar(i);
    if (K.is_split()) return KElem::split_pair(K, cp, cp.neg());
    return KElem::from_parts(K, FieldElement::from_int(K.base(), 0), cp);
  }
};

/// Sector signs: only + is available unless 4 | m.
inline bool sign_allowed(long m, int s) {
  return s == 1 || (s == -1 && m % 4 == 0);
}

/// C_m(nu, t0) = (N(omega), nu)_{F, gcd(2,m)} for any omega with
/// omega/tau(omega) = t0; well defined since omega is unique up to F^x.
inline int cali_factor(const FieldElement& nu, const KElem& t0, long m) {
  if (m % 2 != 0) return 1;
  return cover::omega_norm_factor(etale::hilbert90_solve(t0), nu, m);
}

namespace detail {

inline KElem sector_point(const KElem& t0, int sigma, long m) {
  KElem x = etale::iota(t0, m);
  return sigma < 0 ? x.neg() : x;
}

}  // namespace detail

/// Torus lift with base points and sector signs.  The matrix of block i
/// realizes sigma_i * t0_i^{m/gcd(2,m)} in whatever conjugate of the standard
/// torus embedding the element currently lives in.
struct CalibratedElement {
  TorusParam T;
  std::vector<KElem> t0;
  std::vector<int> sigma;
  cover::BlockCoverElement lift;

  /// Standard realization with trivial kernel.
  static CalibratedElement make(TorusParam T, std::vector<KElem> t0,
                                std::vector<int> sigma, long m) {
    if (t0.size() != T.rank() || sigma.size() != T.rank())
      throw BadInput("block count mismatch");
    std::vector<cover::GL2> g;
    for (size_t i = 0; i < t0.size(); i++) {
      if (!t0[i].algebra().same(T.blocks[i]))
        throw BadInput("base point lives in the wrong algebra");
      NormOneElement norm_check(t0[i]);
      (void)norm_check;
      if (!sign_allowed(m, sigma[i]))
        throw BadInput("sector sign not allowed at this degree");
      g.push_back(cover::torus_matrix(detail::sector_point(t0[i], sigma[i], m)));
    }
    return {std::move(T), std::move(t0), std::move(sigma),
            cover::BlockCoverElement::section(std::move(g), m)};
  }

  long m() const { return lift.zeta.m(); }

  CalibratedElement scaled(const MuM& z) const {
    CalibratedElement r = *this;
    r.lift.zeta = r.lift.zeta * z;
    return r;
  }

  /// Product within one torus realization; sectors multiply blockwise.
  CalibratedElement mul(const CalibratedElement& o) const {
    if (T.rank() != o.T.rank()) throw BadInput("block count mismatch");
    CalibratedElement r{T, {}, {}, lift.mul(o.lift)};
    for (size_t i = 0; i < t0.size(); i++) {
      r.t0.push_back(t0[i].mul(o.t0[i]));
      r.sigma.push_back(sigma[i] * o.sigma[i]);
    }
    return r;
  }

  CalibratedElement inv() const {
    CalibratedElement r{T, {}, sigma, lift.inv()};
    for (const auto& x : t0) r.t0.push_back(x.inv());
    return r;
  }

  bool equals(const CalibratedElement& o) const {
    if (T.rank() != o.T.rank() || sigma != o.sigma) return false;
    for (size_t i = 0; i < T.rank(); i++) {
      if (!T.blocks[i].same(o.T.blocks[i])) return false;
      if (!t0[i].equals(o.t0[i])) return false;
    }
    return lift.equals(o.lift);
  }
};

/// Conjugation of the lift alone; base points ride along unchanged.
inline CalibratedElement ordinary_ad(const std::vector<cover::GL2>& g,
                                     const CalibratedElement& e) {
  CalibratedElement r = e;
  r.lift = e.lift.conj_by(g);
  return r;
}

/// The calibrated adjoint for per-block conjugators g_i.  Minus-sector blocks
/// first factor out the section lift of -1, which stays behind unconjugated
/// while the remainder moves; every block then contributes the calibration
/// sign attached to det g_i.
inline CalibratedElement cad(const std::vector<cover::GL2>& g,
                             const CalibratedElement& e) {
  if (g.size() != e.T.rank()) throw BadInput("block count mismatch");
  long m = e.m();
  std::vector<cover::GL2> pmat;
  for (size_t i = 0; i < g.size(); i++) {
    const LocalField& F = e.T.blocks[i].base();
    pmat.push_back(e.sigma[i] < 0 ? cover::GL2::scalar(F, -1)
                                  : cover::GL2::identity(F));
  }
  auto P = cover::BlockCoverElement::section(pmat, m);
  auto rest = P.inv().mul(e.lift).conj_by(g);
  CalibratedElement r = e;
  r.lift = P.mul(rest);
  for (size_t i = 0; i < g.size(); i++) {
    int c = cali_factor(g[i].det(), e.t0[i], m);
    r.lift.zeta = r.lift.zeta * cover::mu_sign(m, c);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Rational classes inside a stable class.

/// One sign per block: the class of nu_i in F^x / N(K_i^x).  Split blocks
/// have no relative classes and are pinned to +1.
struct InvClass {
  std::vector<int> sgn;

  bool is_trivial() const {
    for (int s : sgn)
      if (s != 1) return false;
    return true;
  }

  bool equals(const InvClass& o) const { return sgn == o.sgn; }
};

inline InvClass inv_class(const TorusParam& T,
                          const std::vector<FieldElement>& nu) {
  if (nu.size() != T.rank()) throw BadInput("block count mismatch");
  InvClass c;
  for (size_t i = 0; i < nu.size(); i++)
    c.sgn.push_back(symbols::sgn_quadratic(T.blocks[i], nu[i]));
  return c;
}

inline InvClass inv_from_conjugator(const TorusParam& T,
                                    const std::vector<cover::GL2>& g) {
  std::vector<FieldElement> nu;
  nu.reserve(g.size());
  for (const auto& gi : g) nu.push_back(gi.det());
  return inv_class(T, nu);
}

/// <kappa_-, c>: the product of the block signs.
inline int kappa_minus(const InvClass& c) {
  int r = 1;
  for (int s : c.sgn) r *= s;
  return r;
}

/// kappa_+ is the trivial character.
inline int kappa_plus(const InvClass&) { return 1; }

// ---------------------------------------------------------------------------
// Class parameters.

/// Regular: no block value is +-1, and blocks sharing an algebra carry
/// neither equal nor inverse values (all eigenvalue pairs distinct).
inline bool is_regular(const TorusParam& T, const std::vector<KElem>& x) {
  if (x.size() != T.rank()) throw BadInput("block count mismatch");
  for (size_t i = 0; i < x.size(); i++) {
    if (!x[i].algebra().same(T.blocks[i]))
      throw BadInput("base point lives in the wrong algebra");
    if (x[i].equals(KElem::from_int(T.blocks[i], 1)) ||
        x[i].equals(KElem::from_int(T.blocks[i], -1)))
      return false;
    for (size_t j = 0; j < i; j++) {
      if (!T.blocks[j].same(T.blocks[i])) continue;
      if (x[i].equals(x[j]) || x[i].equals(x[j].inv())) return false;
    }
  }
  return true;
}

/// Good iff every block value is +-1 times a gcd-adjusted m-th power.
inline bool is_good_element(const std::vector<KElem>& x, long m) {
  for (const auto& xi : x)
    if (!cover::is_good(xi, m)) return false;
  return true;
}

/// Stable conjugacy of class parameters: blocks match up to reordering and
/// inversion within each block.
inline bool stably_conjugate(const std::vector<KElem>& x,
                             const std::vector<KElem>& y) {
  if (x.size() != y.size()) return false;
  std::vector<bool> used(y.size(), false);
  for (const auto& xi : x) {
    bool hit = false;
    for (size_t j = 0; j < y.size() && !hit; j++) {
      if (used[j] || !y[j].algebra().same(xi.algebra())) continue;
      if (xi.equals(y[j]) || xi.equals(y[j].inv())) {
        used[j] = true;
        hit = true;
      }
    }
    if (!hit) return false;
  }
  return true;
}

/// Torus data with one norm-one point per block.
struct RegClassParam {
  TorusParam T;
  std::vector<KElem> x;
};

/// Full equivalence of class parameters: some bijection of blocks preserves
/// the algebra, carries each point to the target up to the tau-action, and
/// makes the induced c-ratio a norm from K.  Applying tau inverts the point
/// and negates c, so an inverted match tests the ratio -c_i'/c_j' instead.
/// Split blocks have no constraint beyond the point (every scalar is a norm).
inline bool equivalent_params(const RegClassParam& a, const RegClassParam& b) {
  size_t n = a.T.rank();
  if (a.x.size() != n || b.x.size() != b.T.rank())
    throw BadInput("block count mismatch");
  if (n == 0 || b.T.rank() == 0) return n == b.T.rank();
  if (!a.T.blocks[0].base().same(b.T.blocks[0].base()))
    throw BadInput("parameters over different base fields");
  if (n != b.T.rank()) return false;

  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end());
  do {
    bool ok = true;
    for (size_t i = 0; i < n && ok; i++) {
      size_t j = perm[i];
      const QuadEtale& K = a.T.blocks[i];
      if (!K.same(b.T.blocks[j])) {
        ok = false;
        break;
      }
      bool id_match = b.x[j].equals(a.x[i]);
      bool tau_match = b.x[j].equals(a.x[i].inv());
      if (!id_match && !tau_match) {
        ok = false;
        break;
      }
      if (K.is_split()) continue;
      FieldElement ratio = a.T.c_scalar(i).mul(b.T.c_scalar(j).inv());
      bool c_ok = false;
      if (id_match) c_ok = symbols::sgn_quadratic(K, ratio) == 1;
      if (tau_match && !c_ok)
        c_ok = symbols::sgn_quadratic(K, ratio.neg()) == 1;
      ok = c_ok;
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace mtp::stab
