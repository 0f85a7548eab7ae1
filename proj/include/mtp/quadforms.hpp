#pragma once

// Diagonal quadratic forms over the base field: signed discriminant, Hasse
// invariant, Weil index (eighth roots of unity via quadratic Gauss sums),
// and Witt decomposition for ranks up to 5.

#include <complex>
#include <vector>

#include "mtp/common.hpp"
#include "mtp/localfield.hpp"
#include "mtp/symbols.hpp"

namespace mtp::qf {

struct QuadForm {
  const LocalField* F;
  std::vector<FieldElement> d;
  int rank() const { return static_cast<int>(d.size()); }
};

inline SquareClass disc_plain(const QuadForm& q) {
  SquareClass c = SquareClass::One;
  for (const auto& e : q.d) c = c * e.square_class();
  return c;
}

/// (-1)^{n(n-1)/2} * d_1 ... d_n as a square class.
inline SquareClass disc_pm(const QuadForm& q) {
  SquareClass c = disc_plain(q);
  long n = q.rank();
  if (((n * (n - 1) / 2) % 2) != 0)
    c = c * FieldElement::from_int(*q.F, -1).square_class();
  return c;
}

/// prod_{i<j} (d_i, d_j)_{F,2}.
inline int hasse(const QuadForm& q) {
  int s = 1;
  for (size_t i = 0; i < q.d.size(); i++)
    for (size_t j = i + 1; j < q.d.size(); j++)
      s *= symbols::hilbert2(q.d[i], q.d[j]);
  return s;
}

inline FieldElement uniformizer(const LocalField& F) {
  if (F.is_ramified()) return FieldElement::theta(F);
  return FieldElement::from_int(F, F.p());
}

// Tolerances for the numeric Gauss-sum step.  The sums are tiny (at most
// q <= 169 unit vectors), so double precision leaves a huge margin.
constexpr double kGaussMagnitudeTol = 1e-6;
constexpr double kGaussSnapTol = 1e-6;

/// gamma_psi(t): Weil index of x -> psi(t x^2), computed as the normalized
/// Gauss sum over the single layer p^j0 / p^(j0+1) with
/// j0 = floor((level+1-v(t))/2).  Integral r collapses to the trivial layer
/// and gives 1.
inline RootOfUnity gauss_gamma(const AdditiveCharacter& psi,
                               const FieldElement& t) {
  const LocalField& F = psi.field();
  if (!t.field().same(F)) throw BadInput("gauss_gamma: field mismatch");
  long num = psi.effective_level() + 1 - t.valuation();  // = 2r
  if ((num % 2) == 0) return RootOfUnity::one();
  long j0 = (num - 1) / 2;
  FieldElement shell = uniformizer(F).pow(j0);
  long p = F.p();
  long q = F.residue_q();
  std::complex<double> g{0.0, 0.0};
  FieldElement th =
      F.f() == 2 ? FieldElement::theta(F) : FieldElement::zero(F);
  for (long idx = 0; idx < q; idx++) {
    long aa = idx % p, bb = idx / p;
    if (aa == 0 && bb == 0) {
      g += 1.0;  // psi(0)
      continue;
    }
    FieldElement s = FieldElement::from_int(F, aa);
    if (bb != 0) s = s.add(FieldElement::from_int(F, bb).mul(th));
    FieldElement x = shell.mul(s);
    g += psi.eval(t.mul(x).mul(x)).to_complex();
  }
  double mag = std::abs(g);
  double expect = std::sqrt(static_cast<double>(q));
  if (std::abs(mag - expect) > kGaussMagnitudeTol * expect)
    throw BadInput("Gauss sum magnitude check failed");
  std::complex<double> unit = g / mag;
  for (int k = 0; k < 8; k++) {
    RootOfUnity w = RootOfUnity::make(k, 8);
    if (std::abs(unit - w.to_complex()) < kGaussSnapTol) return w;
  }
  throw BadInput("Gauss sum does not snap to an 8th root of unity");
}

/// gamma_psi(q) = prod_i gamma_psi(d_i), a Witt-class homomorphism into mu_8.
inline RootOfUnity weil_index(const AdditiveCharacter& psi, const QuadForm& q) {
  RootOfUnity r = RootOfUnity::one();
  for (const auto& e : q.d) r = r * gauss_gamma(psi, e);
  return r;
}

namespace detail {

inline SquareClass minus_one_class(const LocalField& F) {
  return FieldElement::from_int(F, -1).square_class();
}

inline FieldElement class_rep(const LocalField& F, SquareClass c) {
  switch (c) {
    case SquareClass::One: return FieldElement::one(F);
    case SquareClass::U:   return FieldElement::from_int(F, F.nonresidue());
    case SquareClass::P:   return FieldElement::from_int(F, F.p());
    case SquareClass::UP:
      return FieldElement::from_int(F, F.nonresidue() * F.p());
  }
  throw BadInput("bad class");
}

inline int pair_symbol(const LocalField& F, SquareClass a, SquareClass b) {
  return symbols::hilbert2(class_rep(F, a), class_rep(F, b));
}

/// Isotropy from (rank, plain discriminant, Hasse).
inline bool isotropic_inv(const LocalField& F, int n, SquareClass delta,
                          int eps) {
  SquareClass m1 = minus_one_class(F);
  switch (n) {
    case 0:
    case 1:
      return false;
    case 2:
      return delta == m1;
    case 3:
      return eps == pair_symbol(F, m1, m1 * delta);  // (-1, -delta)
    case 4:
      if (delta != SquareClass::One) return true;
      return eps == pair_symbol(F, m1, m1);
    default:
      return true;
  }
}

}  // namespace detail

inline bool is_isotropic(const QuadForm& q) {
  return detail::isotropic_inv(*q.F, q.rank(), disc_plain(q), hasse(q));
}

struct WittDecomposition {
  std::vector<FieldElement> kernel;  // diagonal entries of the anisotropic kernel
  int hyperbolic = 0;                // number of split-off hyperbolic planes
};

/// Repeatedly split off a hyperbolic plane while the isotropy criterion for
/// the current rank holds, then materialize an anisotropic kernel with the
/// residual invariants.
inline WittDecomposition witt_decompose(const QuadForm& q) {
  const LocalField& F = *q.F;
  if (q.rank() > 5) throw UnsupportedParameter("witt_decompose caps rank at 5");
  int n = q.rank();
  SquareClass delta = disc_plain(q);
  int eps = hasse(q);
  SquareClass m1 = detail::minus_one_class(F);
  WittDecomposition out;
  while (n >= 2 && detail::isotropic_inv(F, n, delta, eps)) {
    n -= 2;
    delta = delta * m1;
    eps = eps * detail::pair_symbol(F, m1, delta);
    out.hyperbolic++;
  }
  // Materialize a kernel with invariants (n, delta, eps), anisotropic.
  const SquareClass classes[4] = {SquareClass::One, SquareClass::U,
                                  SquareClass::P, SquareClass::UP};
  auto push = [&](std::initializer_list<SquareClass> cs) {
    for (auto c : cs) out.kernel.push_back(detail::class_rep(F, c));
  };
  if (n == 0) {
    if (eps != 1) throw BadInput("inconsistent Witt bookkeeping");
    return out;
  }
  if (n == 1) {
    if (eps != 1) throw BadInput("inconsistent Witt bookkeeping");
    push({delta});
    return out;
  }
  for (auto c1 : classes)
    for (auto c2 : classes) {
      if (n == 2) {
        if (c1 * c2 != delta) continue;
        if (detail::pair_symbol(F, c1, c2) != eps) continue;
        if (detail::isotropic_inv(F, 2, delta, eps)) continue;
        push({c1, c2});
        return out;
      }
      for (auto c3 : classes) {
        if (n == 3) {
          if (c1 * c2 * c3 != delta) continue;
          int e = detail::pair_symbol(F, c1, c2) *
                  detail::pair_symbol(F, c1, c3) *
                  detail::pair_symbol(F, c2, c3);
          if (e != eps) continue;
          if (detail::isotropic_inv(F, 3, delta, eps)) continue;
          push({c1, c2, c3});
          return out;
        }
        for (auto c4 : classes) {
          if (c1 * c2 * c3 * c4 != delta) continue;
          int e = detail::pair_symbol(F, c1, c2) *
                  detail::pair_symbol(F, c1, c3) *
                  detail::pair_symbol(F, c1, c4) *
                  detail::pair_symbol(F, c2, c3) *
                  detail::pair_symbol(F, c2, c4) *
                  detail::pair_symbol(F, c3, c4);
          if (e != eps) continue;
          if (detail::isotropic_inv(F, 4, delta, eps)) continue;
          push({c1, c2, c3, c4});
          return out;
        }
      }
    }
  throw BadInput("no anisotropic kernel with the residual invariants");
}

}  // namespace mtp::qf
