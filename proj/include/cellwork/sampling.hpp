#pragma once

#include "cellwork/cellular.hpp"

#include <utility>

namespace cellwork {

// Rejection samplers for the diagrams the suites need. Every sampler is a
// deterministic function of the generator state and throws SamplingError
// once kMaxSamplingRetries draws have been rejected.

/// An arrow in M out of src.
inline Hom sample_m_arrow(Rng& rng, const AbGroup& src, const CellularStructure& cs, const Caps& caps) {
  for (int attempt = 0; attempt < kMaxSamplingRetries; ++attempt) {
    Hom f = random_mono(rng, src, caps);
    if (in_class(cokernel(f).group, cs.class_spec)) return f;
  }
  throw SamplingError("sample_m_arrow: no arrow in M within " + std::to_string(kMaxSamplingRetries) + " draws");
}

/// Identity with probability 1/4, otherwise a random M-arrow out of d.
inline Hom sample_m_extension(Rng& rng, const AbGroup& d, const CellularStructure& cs, const Caps& caps) {
  if (rng.chance(1, 4)) return identity(d);
  return sample_m_arrow(rng, d, cs, caps);
}

inline Span sample_m_span(Rng& rng, const CellularStructure& cs, const Caps& caps) {
  AbGroup a = random_group(rng, caps);
  Hom f = sample_m_arrow(rng, a, cs, caps);
  Hom g = sample_m_arrow(rng, a, cs, caps);
  return Span{std::move(f), std::move(g)};
}

/// Pushout square of an M-span, followed by an M-extension of the apex.
inline Square sample_cellular_square(Rng& rng, const CellularStructure& cs, const Caps& caps) {
  Span s = sample_m_span(rng, cs, caps);
  PushoutResult po = pushout(s);
  Hom e = sample_m_extension(rng, po.p, cs, caps);
  return extend_square(pushout_square(po), e);
}

/// A random automorphism of d, found among unimodular changes of generators
/// that respect the relations; identity when none is found quickly.
inline Hom sample_automorphism(Rng& rng, const AbGroup& d) {
  for (int attempt = 0; attempt < 20; ++attempt) {
    Hom a(d, d, random_unimodular(rng, d.n_gens(), 4));
    if (hom_well_defined(a) && is_isomorphism(a)) return a;
  }
  return identity(d);
}

struct Cospan {
  Hom u;  // B -> D
  Hom v;  // C -> D
};

/// Two M-arrows into a common codomain. Half of the draws look for a second
/// subobject directly by rejection; the rest, and any draw whose search runs
/// dry, twist the first arrow by an automorphism of D.
inline Cospan sample_m_cospan(Rng& rng, const CellularStructure& cs, const Caps& caps) {
  AbGroup b = random_group(rng, caps);
  Hom u = sample_m_arrow(rng, b, cs, caps);
  const AbGroup& d = u.dst();
  if (rng.coin()) {
    const Caps small{std::min<std::size_t>(caps.gens, 2), std::min<std::size_t>(caps.rels, 2), caps.entry};
    for (int attempt = 0; attempt < kMaxSamplingRetries; ++attempt) {
      AbGroup c = random_group(rng, small);
      Hom v = random_hom(rng, c, d);
      if (in_M(v, cs)) return Cospan{std::move(u), std::move(v)};
    }
  }
  return Cospan{u, compose(sample_automorphism(rng, d), u)};
}

/// Square over the pullback of an M-cospan: f = q_b, g = q_c, u = v_cospan, v = u_cospan.
inline Square pullback_square(const Cospan& cs) {
  PullbackResult pb = pullback(cs.u, cs.v);
  return Square{pb.q_b, pb.q_c, cs.v, cs.u};
}

/// Square with base 0 over an M-cospan (requires both sources to be cellular objects).
inline Square zero_base_square(const Cospan& cs) {
  const AbGroup z = zero_object();
  return Square{zero_hom(z, cs.u.src()), zero_hom(z, cs.v.src()), cs.v, cs.u};
}

/// Squares with all edges in M drawn from three families so that both
/// independent and non-independent squares occur: cellular squares,
/// pullback squares of M-cospans, and zero-based squares over M-cospans.
inline Square sample_mixed_square(Rng& rng, const CellularStructure& cs, const Caps& caps) {
  for (int attempt = 0; attempt < kMaxSamplingRetries; ++attempt) {
    const auto kind = rng.uniform(0, 2);
    if (kind == 0) return sample_cellular_square(rng, cs, caps);
    Cospan co = sample_m_cospan(rng, cs, caps);
    Square sq = kind == 1 ? pullback_square(co) : zero_base_square(co);
    if (in_M(sq.f, cs) && in_M(sq.g, cs)) return sq;
  }
  throw SamplingError("sample_mixed_square: no square with edges in M within " +
                      std::to_string(kMaxSamplingRetries) + " draws");
}

}  // namespace cellwork
