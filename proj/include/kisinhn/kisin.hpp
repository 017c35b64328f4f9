#pragma once

#include "lattice.hpp"
#include "rational.hpp"
#include "sampling.hpp"

#include <numeric>
#include <string>
#include <vector>

namespace kisinhn {

// Generic fiber: F_q((u))^n with Frobenius x -> A phi(x). e is the ramification index.
struct EtalePhiModule {
  SeriesMatrix A;
  int e = 1;

  EtalePhiModule() = default;
  EtalePhiModule(SeriesMatrix a, int e_) : A(std::move(a)), e(e_) {
    if (A.rows() != A.cols()) throw NonSquare("Frobenius matrix must be square");
    if (e < 1) throw Error("ramification index must be positive");
    if (A.rows() > 0) val_det(A);  // certifies invertibility or throws InsufficientPrecision
  }

  Field ctx() const { return A.ctx(); }
  int n() const { return A.rows(); }
  int p() const { return A.ctx()->p(); }
  int prec() const { return A.prec(); }
};

// A lattice g O^n in an etale phi-module; B = g^-1 A phi(g) is the Frobenius in the lattice basis.
class KisinLattice {
 public:
  KisinLattice() = default;
  KisinLattice(EtalePhiModule parent, SeriesMatrix g) : parent_(std::move(parent)), g_(std::move(g)) {
    if (g_.rows() != parent_.n() || g_.cols() != parent_.n()) throw DimensionMismatch("lattice basis has wrong shape");
    B_ = inverse(g_) * parent_.A * g_.frobenius();
    finish();
  }
  // The standard lattice of the module with Frobenius B.
  static KisinLattice from_frobenius(const SeriesMatrix& B, int e) {
    return KisinLattice(EtalePhiModule(B, e), SeriesMatrix::identity(B.ctx(), B.rows()), B);
  }
  // Internal: caller guarantees B = g^-1 A phi(g).
  KisinLattice(EtalePhiModule parent, SeriesMatrix g, SeriesMatrix B)
      : parent_(std::move(parent)), g_(std::move(g)), B_(std::move(B)) {
    finish();
  }

  const EtalePhiModule& parent() const { return parent_; }
  const SeriesMatrix& basis() const { return g_; }
  const SeriesMatrix& frobenius() const { return B_; }
  Field ctx() const { return B_.ctx(); }
  int e() const { return parent_.e; }
  int p() const { return ctx()->p(); }
  int rank() const { return B_.rows(); }

  const std::vector<int>& hodge_divisors() const { return divs_; }
  int val_det_frobenius() const { return std::accumulate(divs_.begin(), divs_.end(), 0); }
  Rational degree() const { return Rational(val_det_frobenius(), e()); }
  Rational slope() const {
    if (rank() == 0) throw Error("slope of a rank-0 module");
    return degree() / rank();
  }
  bool effective() const { return divs_.empty() || divs_.front() >= 0; }
  // Height window [a, b]: Frobenius image between u^{b e} and u^{a e} multiples.
  int height_low() const { return divs_.empty() ? 0 : floor_div(divs_.front(), e()); }
  int height_high() const { return divs_.empty() ? 0 : ceil_div(divs_.back(), e()); }

 private:
  void finish() {
    if (B_.rows() != B_.cols()) throw NonSquare("Frobenius matrix must be square");
    divs_ = B_.rows() ? elementary_divisors(B_) : std::vector<int>{};
  }
  static int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
  static int ceil_div(int a, int b) { return -floor_div(-a, b); }

  EtalePhiModule parent_;
  SeriesMatrix g_;
  SeriesMatrix B_;
  std::vector<int> divs_;
};

inline Rational degree(const KisinLattice& l) { return l.degree(); }
inline std::vector<int> hodge_divisors(const KisinLattice& l) { return l.hodge_divisors(); }

// Frobenius times u^{s e}.
inline EtalePhiModule tate_twist(const EtalePhiModule& m, int s) { return EtalePhiModule(m.A.shifted(s * m.e), m.e); }
inline KisinLattice tate_twist(const KisinLattice& l, int s) {
  return KisinLattice(tate_twist(l.parent(), s), l.basis(), l.frobenius().shifted(s * l.e()));
}

// Rank-1 module with Frobenius u^{s e}.
inline KisinLattice twist_line(Field f, int s, int e, int prec = LaurentSeries::kExact) {
  return KisinLattice::from_frobenius(SeriesMatrix::monomial_diagonal(f, {s * e}, prec), e);
}

inline void require_compatible(const KisinLattice& a, const KisinLattice& b) {
  if (a.ctx() != b.ctx()) throw DimensionMismatch("lattices over different coefficient fields");
  if (a.e() != b.e()) throw DimensionMismatch("lattices with different ramification");
}

inline KisinLattice tensor(const KisinLattice& a, const KisinLattice& b) {
  require_compatible(a, b);
  EtalePhiModule m(kron(a.parent().A, b.parent().A), a.e());
  return KisinLattice(m, kron(a.basis(), b.basis()), kron(a.frobenius(), b.frobenius()));
}

inline KisinLattice dual(const KisinLattice& l) {
  EtalePhiModule m(inverse(l.parent().A).transpose(), l.e());
  return KisinLattice(m, inverse(l.basis()).transpose(), inverse(l.frobenius()).transpose());
}

inline KisinLattice exterior_power(const KisinLattice& l, int d) {
  if (d < 0 || d > l.rank()) throw DimensionMismatch("exterior power degree out of range");
  EtalePhiModule m(compound(l.parent().A, d), l.e());
  return KisinLattice(m, compound(l.basis(), d), compound(l.frobenius(), d));
}

// Coefficient extension F_q -> F_{q^m}.
inline EtalePhiModule base_change_unramified(const EtalePhiModule& m, int mdeg) {
  if (mdeg < 1) throw Error("extension degree must be positive");
  if (mdeg == 1) return m;
  Field big = field(m.p(), m.ctx()->r() * mdeg);
  auto emb = embedding(m.ctx(), big);
  return EtalePhiModule(m.A.mapped(big, emb), m.e);
}
inline KisinLattice base_change_unramified(const KisinLattice& l, int mdeg) {
  if (mdeg == 1) return l;
  Field big = field(l.p(), l.ctx()->r() * mdeg);
  auto emb = embedding(l.ctx(), big);
  EtalePhiModule m(l.parent().A.mapped(big, emb), l.e());
  return KisinLattice(m, l.basis().mapped(big, emb), l.frobenius().mapped(big, emb));
}

// u = t^m; requires gcd(m, p) = 1. The ramification index becomes e m.
inline EtalePhiModule base_change_tame(const EtalePhiModule& m, int mdeg) {
  if (mdeg < 1 || std::gcd(mdeg, m.p()) != 1)
    throw TameDegreeNotCoprime("tame degree " + std::to_string(mdeg) + " is not prime to p = " + std::to_string(m.p()));
  return EtalePhiModule(m.A.substituted(mdeg), m.e * mdeg);
}
inline KisinLattice base_change_tame(const KisinLattice& l, int mdeg) {
  EtalePhiModule m = base_change_tame(l.parent(), mdeg);
  return KisinLattice(m, l.basis().substituted(mdeg), l.frobenius().substituted(mdeg));
}

// Phi-stable saturated sublattice given by a canonical saturated basis N (lattice
// coordinates, N[pivots] = I): its Frobenius C satisfies B phi(N) = N C.
inline SeriesMatrix restricted_frobenius(const SeriesMatrix& B, const LatticeBasis& N) {
  return (B * N.basis.frobenius()).select_rows(N.pivot_rows);
}

inline KisinLattice sub_lattice(const KisinLattice& l, const LatticeBasis& N) {
  return KisinLattice::from_frobenius(restricted_frobenius(l.frobenius(), N), l.e());
}

// Frobenius of big/small where small, big are phi-stable saturated with small inside big.
inline SeriesMatrix subquotient_frobenius(const SeriesMatrix& B, const LatticeBasis& small, const LatticeBasis& big) {
  SeriesMatrix Cb = restricted_frobenius(B, big);
  int db = big.rank(), ds = small.rank();
  Field f = B.ctx();
  if (ds == 0) return Cb;
  LatticeBasis Y = canonical_basis(small.basis.select_rows(big.pivot_rows));
  if (!Y.saturated()) throw Error("subquotient of a non-saturated inclusion");
  std::vector<int> cols;
  SeriesMatrix P(f, db, db);
  for (int i = 0; i < db; ++i)
    for (int j = 0; j < ds; ++j) P.set(i, j, Y.basis(i, j));
  int c = ds;
  for (int i = 0; i < db; ++i)
    if (std::find(Y.pivot_rows.begin(), Y.pivot_rows.end(), i) == Y.pivot_rows.end())
      P.set(i, c++, LaurentSeries::one(f));
  SeriesMatrix Cp = inverse(P) * Cb * P.frobenius();
  return Cp.block(ds, ds, db - ds, db - ds);
}

inline KisinLattice quotient_lattice(const KisinLattice& l, const LatticeBasis& N) {
  LatticeBasis full = canonical_basis(SeriesMatrix::identity(l.ctx(), l.rank()));
  return KisinLattice::from_frobenius(subquotient_frobenius(l.frobenius(), N, full), l.e());
}

inline KisinLattice subquotient(const KisinLattice& l, const LatticeBasis& small, const LatticeBasis& big) {
  return KisinLattice::from_frobenius(subquotient_frobenius(l.frobenius(), small, big), l.e());
}

// Canonical column form of the lattice inside the generic fiber.
inline LatticeBasis lattice_canonical(const KisinLattice& l) { return canonical_basis(l.basis()); }

// Random lattice with prescribed Hodge divisors: B = U diag(u^d) V.
inline KisinLattice random_lattice(Rng& rng, Field f, int e, const std::vector<int>& divs, int deg = 2,
                                   int prec = 24) {
  return KisinLattice::from_frobenius(random_with_divisors(rng, f, divs, deg, prec), e);
}

// Random lattice in a random generic fiber: A random, g random with a u-power spread.
inline KisinLattice random_lattice_in_fiber(Rng& rng, Field f, int e, const std::vector<int>& a_divs,
                                            const std::vector<int>& g_divs, int deg = 2, int prec = 24) {
  EtalePhiModule m(random_with_divisors(rng, f, a_divs, deg, prec), e);
  return KisinLattice(m, random_with_divisors(rng, f, g_divs, deg, prec));
}

}  // namespace kisinhn
