#pragma once

#include "cellwork/abgrp.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cellwork {

struct TorsionFree {};
struct AllGroups {};
/// Groups X with Ext^1(X, B) = 0 for every listed B.
struct PerpOf {
  std::vector<AbGroup> targets;
};

using ClassSpec = std::variant<TorsionFree, PerpOf, AllGroups>;

/// The morphism class M = monomorphisms whose cokernel lies in the class.
struct CellularStructure {
  ClassSpec class_spec;
};

inline std::string class_name(const ClassSpec& spec) {
  if (std::holds_alternative<TorsionFree>(spec)) return "torsion-free";
  if (std::holds_alternative<AllGroups>(spec)) return "all";
  std::string out = "perp(";
  const auto& targets = std::get<PerpOf>(spec).targets;
  for (std::size_t i = 0; i < targets.size(); ++i) out += (i ? "," : "") + targets[i].canon().str();
  return out + ")";
}

/// Ext^1(a, n) as a presented group.
///
/// The relations of a are first replaced by a lattice basis R (n_a x k) of
/// their span, so 0 -> Z^k -R-> Z^n_a -> a -> 0 is a free resolution. Ext^1 is
/// then the cokernel of precomposition with R, Hom(Z^n_a, n) -> Hom(Z^k, n),
/// i.e. n^k modulo the image of R^T (x) I.
inline AbGroup ext1(const AbGroup& a, const AbGroup& n) {
  const IntMatrix r = image_basis(a.rels());
  const std::size_t k = r.cols();
  const std::size_t m = n.n_gens();
  if (k == 0 || m == 0) return zero_object();
  IntMatrix blocks(m * k, n.rels().cols() * k);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n.rels().cols(); ++j) blocks(c * m + i, c * n.rels().cols() + j) = n.rels()(i, j);
  IntMatrix induced(m * k, m * a.n_gens());
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t j = 0; j < a.n_gens(); ++j) {
      if (r(j, c).is_zero()) continue;
      for (std::size_t x = 0; x < m; ++x) induced(c * m + x, j * m + x) = r(j, c);
    }
  return AbGroup(m * k, hstack(blocks, induced));
}

inline bool in_class(const AbGroup& g, const ClassSpec& spec) {
  if (std::holds_alternative<AllGroups>(spec)) return true;
  if (std::holds_alternative<TorsionFree>(spec)) return g.canon().is_torsion_free();
  // Ext^i vanishes for i >= 2 over Z, so the Ext^1 test is the whole condition.
  if (g.canon().is_torsion_free()) return true;
  for (const auto& b : std::get<PerpOf>(spec).targets)
    if (!ext1(g, b).is_trivial()) return false;
  return true;
}

inline bool in_M(const Hom& f, const CellularStructure& cs) {
  return is_mono(f) && in_class(cokernel(f).group, cs.class_spec);
}

inline bool is_cellular_object(const AbGroup& a, const CellularStructure& cs) { return in_class(a, cs.class_spec); }

struct CellularVerdict {
  bool is_cellular = false;
  Hom mediating;  // P -> D
  PushoutResult pushout;
};

/// Throws PreconditionError naming the first edge outside M (edges checked f, g, u, v).
inline void require_edges_in_M(const Square& sq, const CellularStructure& cs) {
  const std::pair<const Hom*, const char*> edges[] = {{&sq.f, "f"}, {&sq.g, "g"}, {&sq.u, "u"}, {&sq.v, "v"}};
  for (const auto& [h, name] : edges)
    if (!in_M(*h, cs)) throw PreconditionError(std::string("edge ") + name + " is not in M");
}

inline void require_valid_square(const Square& sq, const CellularStructure& cs) {
  if (!square_commutes(sq)) throw PreconditionError("square does not commute (u.g != v.f)");
  require_edges_in_M(sq, cs);
}

/// The square is cellular iff the mediating arrow from the pushout of its span is in M.
inline CellularVerdict is_cellular_square(const Square& sq, const CellularStructure& cs) {
  require_valid_square(sq, cs);
  PushoutResult po = pushout(sq.span());
  Hom t = mediating_from_pushout(po, sq.v, sq.u);
  const bool ok = in_M(t, cs);
  return CellularVerdict{ok, std::move(t), std::move(po)};
}

/// For a mono f: A -> B with free cokernel Z^q, a section s: Z^q -> B of the
/// cokernel projection. [f | s]: A + Z^q -> B is then an isomorphism.
inline std::optional<Hom> free_cokernel_section(const Hom& f) {
  if (!is_mono(f)) return std::nullopt;
  const AbGroup q = cokernel(f).group;
  if (!q.canon().is_torsion_free()) return std::nullopt;
  const SnfResult& snf = q.relation_solver().snf();
  const std::size_t r = q.relation_solver().rank();
  const std::size_t n = q.n_gens();
  return Hom(AbGroup::free(n - r), f.dst(), snf.u_inv.col_range(r, n));
}

/// Smallest prime p with Z/p outside the class, if any (bounded search).
inline std::optional<int> smallest_excluded_prime(const ClassSpec& spec, int limit = 97) {
  for (int p = 2; p <= limit; ++p) {
    bool prime = true;
    for (int d = 2; d * d <= p; ++d)
      if (p % d == 0) prime = false;
    if (prime && !in_class(AbGroup::cyclic(p), spec)) return p;
  }
  return std::nullopt;
}

}  // namespace cellwork
