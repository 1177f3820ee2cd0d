#pragma once

#include "cellwork/errors.hpp"
#include "cellwork/linalg.hpp"
#include "cellwork/random.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cellwork {

/// Invariant-factor decomposition Z^free_rank + sum Z/t_i with t_i | t_{i+1}, t_i >= 2.
struct Canon {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;

  bool is_trivial() const noexcept { return free_rank == 0 && torsion.empty(); }
  bool is_torsion_free() const noexcept { return torsion.empty(); }
  /// Group order, or 0 when infinite.
  Integer order() const {
    if (free_rank > 0) return Integer(0);
    Integer n = 1;
    for (const auto& t : torsion) n *= t;
    return n;
  }
  std::string str() const {
    std::string out;
    if (free_rank > 0) out = free_rank == 1 ? "Z" : "Z^" + std::to_string(free_rank);
    for (const auto& t : torsion) out += (out.empty() ? "" : " + ") + std::string("Z/") + t.str();
    return out.empty() ? "0" : out;
  }
  friend bool operator==(const Canon&, const Canon&) = default;
};

/// A finitely presented abelian group Z^n_gens / (column span of rels).
///
/// The presentation is kept verbatim; the Smith form of rels and the derived
/// canonical decomposition are cached alongside it and shared between copies.
class AbGroup {
 public:
  /// The zero group (no generators).
  AbGroup() : AbGroup(0, IntMatrix(0, 0)) {}

  AbGroup(std::size_t n_gens, IntMatrix rels) {
    if (rels.rows() != n_gens)
      throw InputError("AbGroup: relation matrix has " + std::to_string(rels.rows()) + " rows for " +
                       std::to_string(n_gens) + " generators");
    auto impl = std::make_shared<Impl>();
    impl->n_gens = n_gens;
    impl->rels = std::move(rels);
    impl->solver = std::make_unique<SpanSolver>(impl->rels, true);
    const SnfResult& snf = impl->solver->snf();
    const std::size_t r = impl->solver->rank();
    for (std::size_t i = 0; i < r; ++i)
      if (!(snf.s(i, i) == Integer(1))) impl->canon.torsion.push_back(snf.s(i, i));
    impl->canon.free_rank = n_gens - r;
    impl_ = std::move(impl);
  }

  static AbGroup free(std::size_t rank) { return AbGroup(rank, IntMatrix(rank, 0)); }

  /// Z/n, with n = 0 meaning Z.
  static AbGroup cyclic(const Integer& n) {
    if (n.is_zero()) return free(1);
    return AbGroup(1, IntMatrix(1, 1, {abs(n)}));
  }

  /// Diagonal presentation Z^free_rank + sum Z/t_i (factors in the given order).
  static AbGroup from_invariants(std::size_t free_rank, const std::vector<Integer>& torsion) {
    const std::size_t n = torsion.size() + free_rank;
    IntMatrix rels(n, torsion.size());
    for (std::size_t i = 0; i < torsion.size(); ++i) rels(i, i) = torsion[i];
    return AbGroup(n, std::move(rels));
  }

  std::size_t n_gens() const noexcept { return impl_->n_gens; }
  const IntMatrix& rels() const noexcept { return impl_->rels; }
  const Canon& canon() const noexcept { return impl_->canon; }
  const SpanSolver& relation_solver() const noexcept { return *impl_->solver; }

  bool is_trivial() const noexcept { return impl_->canon.is_trivial(); }

  /// Generator-coordinate vector represents the zero element.
  bool is_zero_element(const IntVector& x) const { return impl_->solver->contains(x); }

  /// Coordinates of x in the canonical decomposition: torsion coordinates
  /// reduced into [0, t_i), followed by the free coordinates. Two vectors
  /// represent the same element iff their canonical coordinates agree.
  IntVector canonical_coordinates(const IntVector& x) const {
    const SnfResult& snf = impl_->solver->snf();
    const std::size_t r = impl_->solver->rank();
    IntVector y = snf.u.apply(x);
    IntVector out;
    out.reserve(impl_->canon.torsion.size() + impl_->canon.free_rank);
    for (std::size_t i = 0; i < r; ++i)
      if (!(snf.s(i, i) == Integer(1))) out.push_back(mod_floor(y[i], snf.s(i, i)));
    for (std::size_t i = r; i < y.size(); ++i) out.push_back(y[i]);
    return out;
  }

  /// Literal presentation equality (not isomorphism).
  friend bool operator==(const AbGroup& a, const AbGroup& b) {
    return a.impl_ == b.impl_ || (a.impl_->n_gens == b.impl_->n_gens && a.impl_->rels == b.impl_->rels);
  }

 private:
  struct Impl {
    std::size_t n_gens = 0;
    IntMatrix rels;
    std::unique_ptr<SpanSolver> solver;
    Canon canon;
  };
  std::shared_ptr<const Impl> impl_;
};

inline const Canon& canon(const AbGroup& a) { return a.canon(); }

/// Homomorphism given on generators: column j is the image of generator j of src.
class Hom {
 public:
  /// The zero map 0 -> 0.
  Hom() : mat_(0, 0) {}
  Hom(AbGroup src, AbGroup dst, IntMatrix mat) : src_(std::move(src)), dst_(std::move(dst)), mat_(std::move(mat)) {
    if (mat_.rows() != dst_.n_gens() || mat_.cols() != src_.n_gens())
      throw InputError("Hom: matrix is " + mat_.shape() + " but must be " + std::to_string(dst_.n_gens()) + "x" +
                       std::to_string(src_.n_gens()));
  }

  const AbGroup& src() const noexcept { return src_; }
  const AbGroup& dst() const noexcept { return dst_; }
  const IntMatrix& mat() const noexcept { return mat_; }

 private:
  AbGroup src_;
  AbGroup dst_;
  IntMatrix mat_;
};

/// B <-f- A -g-> C
struct Span {
  Hom f;
  Hom g;
};

/// Commutative square: f: A->B (bottom), g: A->C (left), u: C->D (top), v: B->D (right).
struct Square {
  Hom f;
  Hom g;
  Hom u;
  Hom v;

  const AbGroup& a() const { return f.src(); }
  const AbGroup& b() const { return f.dst(); }
  const AbGroup& c() const { return g.dst(); }
  const AbGroup& d() const { return u.dst(); }
  Span span() const { return Span{f, g}; }
};

struct PushoutResult {
  AbGroup p;
  Hom into_b;
  Hom into_c;
  Span span;
};

struct PullbackResult {
  AbGroup q;
  Hom q_b;
  Hom q_c;
  /// Lattice basis (columns) of the pair lattice inside Z^(n_B + n_C); q's generators.
  IntMatrix basis;
};

struct CokernelResult {
  AbGroup group;
  Hom projection;
};

struct KernelResult {
  AbGroup group;
  Hom inclusion;
};

// ---------------------------------------------------------------------------
// Basic constructions

inline AbGroup zero_object() { return AbGroup(); }

inline AbGroup direct_sum(const AbGroup& a, const AbGroup& b) {
  return AbGroup(a.n_gens() + b.n_gens(), block_diag(a.rels(), b.rels()));
}

inline Hom identity(const AbGroup& a) { return Hom(a, a, IntMatrix::identity(a.n_gens())); }

inline Hom zero_hom(const AbGroup& a, const AbGroup& b) { return Hom(a, b, IntMatrix(b.n_gens(), a.n_gens())); }

/// a -> a + b
inline Hom inject_first(const AbGroup& a, const AbGroup& b) {
  return Hom(a, direct_sum(a, b), vstack(IntMatrix::identity(a.n_gens()), IntMatrix(b.n_gens(), a.n_gens())));
}
/// b -> a + b
inline Hom inject_second(const AbGroup& a, const AbGroup& b) {
  return Hom(b, direct_sum(a, b), vstack(IntMatrix(a.n_gens(), b.n_gens()), IntMatrix::identity(b.n_gens())));
}
/// a + b -> a
inline Hom project_first(const AbGroup& a, const AbGroup& b) {
  return Hom(direct_sum(a, b), a, hstack(IntMatrix::identity(a.n_gens()), IntMatrix(a.n_gens(), b.n_gens())));
}
/// a + b -> b
inline Hom project_second(const AbGroup& a, const AbGroup& b) {
  return Hom(direct_sum(a, b), b, hstack(IntMatrix(b.n_gens(), a.n_gens()), IntMatrix::identity(b.n_gens())));
}

inline void require_same_endpoints(const Hom& f, const Hom& g, const char* op) {
  if (!(f.src() == g.src()) || !(f.dst() == g.dst()))
    throw InputError(std::string(op) + ": homomorphisms have different endpoints");
}

inline Hom hom_add(const Hom& f, const Hom& g) {
  require_same_endpoints(f, g, "hom_add");
  return Hom(f.src(), f.dst(), f.mat() + g.mat());
}

inline Hom hom_scale(const Integer& k, const Hom& f) { return Hom(f.src(), f.dst(), k * f.mat()); }

inline bool hom_well_defined(const Hom& h) {
  return h.dst().relation_solver().contains_columns(h.mat() * h.src().rels());
}

/// Equality as homomorphisms: the matrices differ by relations of the codomain.
inline bool hom_equal(const Hom& f, const Hom& g) {
  require_same_endpoints(f, g, "hom_equal");
  if (f.mat() == g.mat()) return true;
  return f.dst().relation_solver().contains_columns(f.mat() - g.mat());
}

/// g after f.
inline Hom compose(const Hom& g, const Hom& f) {
  if (!(f.dst() == g.src())) throw InputError("compose: codomain of the first arrow is not the domain of the second");
  return Hom(f.src(), g.dst(), g.mat() * f.mat());
}

/// Columns generate the lattice {x : mat x in span rels(dst)}.
inline IntMatrix preimage_generators(const Hom& f) {
  const std::size_t n = f.src().n_gens();
  IntMatrix k = kernel_basis(hstack(f.mat(), f.dst().rels()));
  return k.row_range(0, n);
}

inline bool is_mono(const Hom& f) {
  return f.src().relation_solver().contains_columns(preimage_generators(f));
}

/// Cokernel presented on the generators of dst; the projection is the identity matrix.
inline CokernelResult cokernel(const Hom& f) {
  AbGroup q(f.dst().n_gens(), hstack(f.dst().rels(), f.mat()));
  Hom proj(f.dst(), q, IntMatrix::identity(f.dst().n_gens()));
  return CokernelResult{q, std::move(proj)};
}

inline bool is_epi(const Hom& f) { return cokernel(f).group.is_trivial(); }

inline bool is_isomorphism(const Hom& f) { return is_mono(f) && is_epi(f); }

namespace detail {

/// Subgroup presentation from a generating set of a lattice L containing span(rels):
/// returns (basis W of L, relations = rels expressed in W).
inline std::pair<IntMatrix, IntMatrix> sublattice_presentation(const IntMatrix& generators, const IntMatrix& rels) {
  IntMatrix w = image_basis(generators);
  SpanSolver in_basis(w);
  auto z = in_basis.solve_columns(rels);
  if (!z) throw std::logic_error("sublattice_presentation: relations outside the lattice");
  return {std::move(w), std::move(*z)};
}

}  // namespace detail

inline KernelResult kernel(const Hom& f) {
  auto [w, z] = detail::sublattice_presentation(preimage_generators(f), f.src().rels());
  AbGroup k(w.cols(), std::move(z));
  Hom inc(k, f.src(), std::move(w));
  return KernelResult{k, std::move(inc)};
}

// ---------------------------------------------------------------------------
// Pushouts and pullbacks

inline void require_span(const Span& s) {
  if (!(s.f.src() == s.g.src())) throw InputError("span: legs have different domains");
}

/// P = (B + C) / {(f(x), -g(x))}.
inline PushoutResult pushout(const Span& s) {
  require_span(s);
  const AbGroup& b = s.f.dst();
  const AbGroup& c = s.g.dst();
  IntMatrix glue = vstack(s.f.mat(), -s.g.mat());
  AbGroup p(b.n_gens() + c.n_gens(), hstack(block_diag(b.rels(), c.rels()), glue));
  Hom into_b(b, p, vstack(IntMatrix::identity(b.n_gens()), IntMatrix(c.n_gens(), b.n_gens())));
  Hom into_c(c, p, vstack(IntMatrix(b.n_gens(), c.n_gens()), IntMatrix::identity(c.n_gens())));
  return PushoutResult{p, std::move(into_b), std::move(into_c), s};
}

/// The unique t: P -> X with t into_b = b and t into_c = c.
inline Hom mediating_from_pushout(const PushoutResult& po, const Hom& b, const Hom& c) {
  if (!(b.src() == po.into_b.src()) || !(c.src() == po.into_c.src()) || !(b.dst() == c.dst()))
    throw InputError("mediating_from_pushout: cocone arrows do not match the pushout's legs");
  if (!hom_equal(compose(b, po.span.f), compose(c, po.span.g)))
    throw InputError("mediating_from_pushout: cocone condition b.f = c.g fails");
  return Hom(po.p, b.dst(), hstack(b.mat(), c.mat()));
}

/// Q = {(x, y) : u(x) = v(y)} inside B + C.
inline PullbackResult pullback(const Hom& u, const Hom& v) {
  if (!(u.dst() == v.dst())) throw InputError("pullback: arrows have different codomains");
  const AbGroup& b = u.src();
  const AbGroup& c = v.src();
  const std::size_t nb = b.n_gens(), nc = c.n_gens();
  IntMatrix k = kernel_basis(hstack(hstack(u.mat(), -v.mat()), u.dst().rels()));
  auto [w, z] = detail::sublattice_presentation(k.row_range(0, nb + nc), block_diag(b.rels(), c.rels()));
  AbGroup q(w.cols(), std::move(z));
  Hom q_b(q, b, w.row_range(0, nb));
  Hom q_c(q, c, w.row_range(nb, nb + nc));
  return PullbackResult{q, std::move(q_b), std::move(q_c), std::move(w)};
}

/// The unique m: X -> Q with q_b m = p and q_c m = r.
inline Hom mediating_into_pullback(const PullbackResult& pb, const Hom& u, const Hom& v, const Hom& p, const Hom& r) {
  if (!(p.dst() == pb.q_b.dst()) || !(r.dst() == pb.q_c.dst()) || !(p.src() == r.src()))
    throw InputError("mediating_into_pullback: cone arrows do not match the pullback's legs");
  if (!hom_equal(compose(u, p), compose(v, r)))
    throw InputError("mediating_into_pullback: cone condition u.p = v.r fails");
  SpanSolver in_basis(pb.basis);
  auto m = in_basis.solve_columns(vstack(p.mat(), r.mat()));
  if (!m) throw std::logic_error("mediating_into_pullback: cone leaves the pair lattice");
  return Hom(p.src(), pb.q, std::move(*m));
}

// ---------------------------------------------------------------------------
// Squares

/// Endpoint consistency of the four arrows (throws InputError naming the mismatch).
inline void require_square_shape(const Square& sq) {
  if (!(sq.f.src() == sq.g.src())) throw InputError("square: f and g have different domains");
  if (!(sq.u.src() == sq.g.dst())) throw InputError("square: u does not start at the codomain of g");
  if (!(sq.v.src() == sq.f.dst())) throw InputError("square: v does not start at the codomain of f");
  if (!(sq.u.dst() == sq.v.dst())) throw InputError("square: u and v have different codomains");
}

inline bool square_commutes(const Square& sq) {
  require_square_shape(sq);
  return hom_equal(compose(sq.u, sq.g), compose(sq.v, sq.f));
}

/// Mirror across the diagonal through A and D.
inline Square transpose(const Square& sq) { return Square{sq.g, sq.f, sq.v, sq.u}; }

/// The square of a pushout: D = P, u = into_c, v = into_b.
inline Square pushout_square(const PushoutResult& po) {
  return Square{po.span.f, po.span.g, po.into_c, po.into_b};
}

/// Postcompose the top-right corner with e: D -> E.
inline Square extend_square(const Square& sq, const Hom& e) {
  return Square{sq.f, sq.g, compose(e, sq.u), compose(e, sq.v)};
}

/// True iff sq has the pullback universal property (A -> pullback(v, u) is an isomorphism).
inline bool is_pullback_square(const Square& sq) {
  PullbackResult pb = pullback(sq.v, sq.u);
  Hom m = mediating_into_pullback(pb, sq.v, sq.u, sq.f, sq.g);
  return is_isomorphism(m);
}

// ---------------------------------------------------------------------------
// Hom groups

struct HomGenerator {
  Hom hom;
  /// Additive order in Hom(a, b); 0 = infinite.
  Integer order;
};

/// Generators of Hom(a, b), one per pair of nontrivial cyclic factors.
///
/// Both groups are diagonalized through their cached Smith forms; between
/// factors Z/d and Z/e the generator is 1 -> e/gcd(d, e) (order gcd(d, e)),
/// Z -> Z/e sends 1 -> 1, and Z/d -> Z is zero.
inline std::vector<HomGenerator> hom_group(const AbGroup& a, const AbGroup& b) {
  const SnfResult& sa = a.relation_solver().snf();
  const SnfResult& sb = b.relation_solver().snf();
  const std::size_t ra = a.relation_solver().rank();
  const std::size_t rb = b.relation_solver().rank();
  auto factor = [](const SnfResult& s, std::size_t rank, std::size_t i) {
    return i < rank ? s.s(i, i) : Integer(0);
  };
  std::vector<HomGenerator> gens;
  for (std::size_t i = 0; i < a.n_gens(); ++i) {
    const Integer d = factor(sa, ra, i);
    if (d == Integer(1)) continue;
    for (std::size_t j = 0; j < b.n_gens(); ++j) {
      const Integer e = factor(sb, rb, j);
      if (e == Integer(1)) continue;
      Integer c, order;
      if (d.is_zero()) {
        c = 1;
        order = e;
      } else {
        if (e.is_zero()) continue;
        Integer g = gcd(d, e);
        if (g == Integer(1)) continue;
        c = e / g;
        order = g;
      }
      // (U_b^-1 column j) * c * (U_a row i)
      IntMatrix m(b.n_gens(), a.n_gens());
      for (std::size_t r = 0; r < b.n_gens(); ++r) {
        const Integer& left = sb.u_inv(r, j);
        if (left.is_zero()) continue;
        for (std::size_t k = 0; k < a.n_gens(); ++k) m(r, k) = left * c * sa.u(i, k);
      }
      gens.push_back(HomGenerator{Hom(a, b, std::move(m)), std::move(order)});
    }
  }
  return gens;
}

inline std::vector<Hom> hom_group_generators(const AbGroup& a, const AbGroup& b) {
  std::vector<Hom> out;
  for (auto& g : hom_group(a, b)) out.push_back(std::move(g.hom));
  return out;
}

// ---------------------------------------------------------------------------
// Seeded sampling

/// Presentation-size bounds for random groups.
struct Caps {
  std::size_t gens = 4;
  std::size_t rels = 4;
  std::int64_t entry = 6;
};

inline constexpr int kMaxSamplingRetries = 1000;

inline AbGroup random_group(Rng& rng, const Caps& caps) {
  std::size_t n = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(caps.gens)));
  if (rng.chance(1, 16)) n = 0;
  const std::size_t k = n == 0 ? 0 : static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(caps.rels)));
  IntMatrix rels(n, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (rng.coin()) continue;
      std::int64_t x = rng.uniform(1, caps.entry);
      rels(i, j) = rng.coin() ? x : -x;
    }
  return AbGroup(n, std::move(rels));
}

inline AbGroup random_group(std::uint64_t seed, const Caps& caps) {
  Rng rng(seed);
  return random_group(rng, caps);
}

/// Integer combination (coefficients in [-coeff, coeff]) of the Hom(a, b) generators.
inline Hom random_hom(Rng& rng, const AbGroup& a, const AbGroup& b, std::int64_t coeff = 3) {
  IntMatrix m(b.n_gens(), a.n_gens());
  for (const auto& g : hom_group(a, b)) {
    const std::int64_t k = rng.uniform(-coeff, coeff);
    if (k != 0) m = m + Integer(k) * g.hom.mat();
  }
  return Hom(a, b, std::move(m));
}

inline Hom random_hom(std::uint64_t seed, const AbGroup& a, const AbGroup& b) {
  Rng rng(seed);
  return random_hom(rng, a, b);
}

/// Random unimodular matrix: a short product of elementary operations.
inline IntMatrix random_unimodular(Rng& rng, std::size_t n, int steps = 3) {
  IntMatrix m = IntMatrix::identity(n);
  if (n == 0) return m;
  for (int s = 0; s < steps; ++s) {
    const auto i = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(n) - 1));
    const auto j = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(n) - 1));
    if (i == j) {
      if (rng.coin())
        for (std::size_t c = 0; c < n; ++c) m(i, c) = -m(i, c);
      continue;
    }
    const Integer q = rng.uniform(-2, 2);
    for (std::size_t c = 0; c < n; ++c) m(i, c) += q * m(j, c);
  }
  return m;
}

/// An isomorphism a -> a' onto a re-presented copy of a (generators changed
/// by a random unimodular matrix U, relations U * rels).
inline Hom random_presentation_change(Rng& rng, const AbGroup& a) {
  IntMatrix u = random_unimodular(rng, a.n_gens());
  AbGroup image(a.n_gens(), u * a.rels());
  return Hom(a, image, std::move(u));
}

/// A monomorphism out of a: (phi; h): a -> a + R for a random extra summand R,
/// phi = id or a random endomorphism, h random; non-monos are rejected. The
/// codomain is then re-presented by a random unimodular change of generators.
inline Hom random_mono(Rng& rng, const AbGroup& a, const Caps& caps) {
  const Caps extra{std::min<std::size_t>(caps.gens, 2), std::min<std::size_t>(caps.rels, 2), caps.entry};
  for (int attempt = 0; attempt < kMaxSamplingRetries; ++attempt) {
    AbGroup r = random_group(rng, extra);
    AbGroup sum = direct_sum(a, r);
    IntMatrix phi = rng.coin() ? IntMatrix::identity(a.n_gens()) : random_hom(rng, a, a).mat();
    IntMatrix h = random_hom(rng, a, r).mat();
    Hom e(a, sum, vstack(phi, h));
    if (!is_mono(e)) continue;
    return compose(random_presentation_change(rng, sum), e);
  }
  throw SamplingError("random_mono: no monomorphism found within " + std::to_string(kMaxSamplingRetries) +
                      " draws");
}

inline Hom random_mono(std::uint64_t seed, const AbGroup& a, const Caps& caps) {
  Rng rng(seed);
  return random_mono(rng, a, caps);
}

}  // namespace cellwork
