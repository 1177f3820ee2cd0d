#pragma once

#include "cellwork/builtins.hpp"
#include "cellwork/parallel.hpp"
#include "cellwork/report.hpp"
#include "cellwork/sampling.hpp"

#include <string>
#include <type_traits>

namespace cellwork {

/// Seeded run parameters shared by every suite.
struct SuiteConfig {
  CellularStructure cs{TorsionFree{}};
  std::uint64_t seed = 7;
  std::uint64_t samples = 200;
  Caps caps{};
  int bound = 2;
  unsigned threads = 1;
};

/// Runs body(rng, result[, index]) for every sample index with a derived per-sample seed.
/// SamplingError marks the sample starved; any other error is a failure of the harness itself.
template <class Body>
CheckReport run_samples(const std::string& suite, const SuiteConfig& cfg, Body body) {
  if (cfg.samples == 0) throw InputError(suite + ": samples must be positive");
  auto results = map_indexed(cfg.samples, cfg.threads, [&](std::size_t i) {
    SampleResult r;
    Rng rng(derive_seed(cfg.seed, suite, i));
    try {
      if constexpr (std::is_invocable_v<Body&, Rng&, SampleResult&, std::size_t>) {
        body(rng, r, i);
      } else {
        body(rng, r);
      }
    } catch (const SamplingError&) {
      r = SampleResult{};
      r.starved = true;
    } catch (const std::exception& e) {
      r = SampleResult{};
      r.fail("harness-error", e.what(), Json());
    }
    return r;
  });
  CheckReport report;
  report.suite = suite;
  report.samples = cfg.samples;
  for (std::size_t i = 0; i < results.size(); ++i) report.absorb(i, std::move(results[i]));
  return report;
}

inline Json composable_witness(const builtins::Composable& c, const CellularStructure& cs) {
  return Witness()
      .structure(cs)
      .hom("f", c.f, "A", "B")
      .hom("g", c.g, "B", "C")
      .hom("gf", compose(c.g, c.f), "A", "C")
      .json();
}

namespace detail {

/// Prime used to instantiate the parameterized builtin witnesses (2 when the class excludes nothing).
inline int witness_prime(const CellularStructure& cs) { return smallest_excluded_prime(cs.class_spec).value_or(2); }

inline void left_cancel_builtins(CheckReport& report, const CellularStructure& cs, bool require_g_in_M) {
  auto classify = [&](const std::string& name, const builtins::Composable& c) {
    const bool gf_in = in_M(compose(c.g, c.f), cs);
    const bool g_in = in_M(c.g, cs);
    const bool f_in = in_M(c.f, cs);
    const bool premise = gf_in && (!require_g_in_M || g_in);
    const bool bad = premise && !f_in;
    std::string detail = std::string("gf in M: ") + (gf_in ? "yes" : "no") + ", g in M: " + (g_in ? "yes" : "no") +
                         ", f in M: " + (f_in ? "yes" : "no") +
                         ", coker f = " + cokernel(c.f).group.canon().str();
    report.add_builtin(name, bad, detail, composable_witness(c, cs), "f-not-in-M");
  };
  classify("left_cancel_coprojection", builtins::left_cancel_coprojection(witness_prime(cs)));
  classify("left_cancel_hand_triple", builtins::left_cancel_hand_triple());
}

}  // namespace detail

/// gf in M and g in M imply f in M.
inline CheckReport check_coherence(const SuiteConfig& cfg) {
  const auto& cs = cfg.cs;
  CheckReport report = run_samples("coherence", cfg, [&](Rng& rng, SampleResult& r) {
    for (int attempt = 0; attempt < kMaxSamplingRetries; ++attempt) {
      AbGroup a = random_group(rng, cfg.caps);
      Hom f = random_mono(rng, a, cfg.caps);
      Hom g = sample_m_arrow(rng, f.dst(), cs, cfg.caps);
      if (!in_M(compose(g, f), cs)) continue;
      if (in_M(f, cs)) {
        r.count("f-in-M");
      } else {
        r.fail("f-not-in-M", "gf and g in M but coker f = " + cokernel(f).group.canon().str(),
               composable_witness({f, g}, cs));
      }
      return;
    }
    throw SamplingError("coherence: premise gf in M never met");
  });
  detail::left_cancel_builtins(report, cs, true);
  return report;
}

/// gf in M implies f in M (no assumption on g).
inline CheckReport check_left_cancellable(const SuiteConfig& cfg) {
  const auto& cs = cfg.cs;
  CheckReport report = run_samples("left-cancel", cfg, [&](Rng& rng, SampleResult& r) {
    for (int attempt = 0; attempt < kMaxSamplingRetries; ++attempt) {
      AbGroup a = random_group(rng, cfg.caps);
      Hom f = random_mono(rng, a, cfg.caps);
      AbGroup c = rng.coin() ? a : random_group(rng, cfg.caps);
      Hom g = random_hom(rng, f.dst(), c);
      if (!in_M(compose(g, f), cs)) continue;
      if (in_M(f, cs)) {
        r.count("f-in-M");
      } else {
        r.fail("f-not-in-M", "gf in M but coker f = " + cokernel(f).group.canon().str(),
               composable_witness({f, g}, cs));
      }
      return;
    }
    throw SamplingError("left-cancel: premise gf in M never met");
  });
  detail::left_cancel_builtins(report, cs, false);
  return report;
}

namespace detail {

struct UnionOutcome {
  bool projections_in_M = false;
  bool cellular = false;
  std::string detail;
};

inline UnionOutcome classify_union(const Hom& u, const Hom& v, const CellularStructure& cs) {
  UnionOutcome out;
  Square sq = pullback_square(Cospan{u, v});
  out.projections_in_M = in_M(sq.f, cs) && in_M(sq.g, cs);
  if (!out.projections_in_M) {
    out.detail = "pullback projection not in M";
    return out;
  }
  CellularVerdict verdict = is_cellular_square(sq, cs);
  out.cellular = verdict.is_cellular;
  out.detail = "mediating cokernel " + cokernel(verdict.mediating).group.canon().str() +
               (is_mono(verdict.mediating) ? "" : ", mediating not mono");
  return out;
}

inline Json union_witness(const Hom& u, const Hom& v, const CellularStructure& cs) {
  return Witness()
      .structure(cs)
      .notion("cellular")
      .cospan("w", u, v)
      .square("w_pullback", pullback_square(Cospan{u, v}), "p.")
      .json();
}

}  // namespace detail

/// For M-cospans: pullback projections are in M, and the pullback square is cellular.
inline CheckReport check_effective_unions(const SuiteConfig& cfg) {
  const auto& cs = cfg.cs;
  CheckReport report = run_samples("effective-unions", cfg, [&](Rng& rng, SampleResult& r) {
    Cospan co = sample_m_cospan(rng, cs, cfg.caps);
    auto out = detail::classify_union(co.u, co.v, cs);
    if (!out.projections_in_M) {
      r.fail("projection-not-in-M", out.detail, detail::union_witness(co.u, co.v, cs));
      return;
    }
    r.count("projections-in-M");
    if (out.cellular) {
      r.count("cellular");
    } else {
      r.fail("pullback-not-cellular", out.detail, detail::union_witness(co.u, co.v, cs));
    }
  });
  auto builtin = [&](const std::string& name, const Square& sq) {
    auto out = detail::classify_union(sq.v, sq.u, cs);
    const bool bad = !out.projections_in_M || !out.cellular;
    report.add_builtin(name, bad, out.detail, detail::union_witness(sq.v, sq.u, cs),
                       out.projections_in_M ? "pullback-not-cellular" : "projection-not-in-M");
  };
  builtin("reg_pullback", builtins::reg_pullback(detail::witness_prime(cs)));
  builtin("coordinate_pullback", builtins::coordinate_pullback());
  return report;
}

struct FactPremises {
  bool pullback_stable = false;  // projections of the pullback of (v, u) lie in M
  bool epis_are_isos = false;    // every epi in M among the square's arrows and t is an iso
};

inline FactPremises fact_premises(const Square& sq, const Hom& mediating, const CellularStructure& cs) {
  FactPremises p;
  PullbackResult pb = pullback(sq.v, sq.u);
  p.pullback_stable = in_M(pb.q_b, cs) && in_M(pb.q_c, cs);
  p.epis_are_isos = true;
  for (const Hom* h : {&sq.f, &sq.g, &sq.u, &sq.v, &mediating})
    if (in_M(*h, cs) && is_epi(*h) && !is_isomorphism(*h)) p.epis_are_isos = false;
  return p;
}

/// Cellular squares are pullback squares; both premises are recorded per sample.
inline CheckReport check_cellular_implies_pullback(const SuiteConfig& cfg) {
  const auto& cs = cfg.cs;
  auto classify = [&](const Square& sq, SampleResult& r) {
    CellularVerdict verdict = is_cellular_square(sq, cs);
    if (!verdict.is_cellular) {
      r.count("not-cellular");
      return;
    }
    FactPremises prem = fact_premises(sq, verdict.mediating, cs);
    r.count(prem.pullback_stable ? "premise-pullback-stable-held" : "premise-pullback-stable-violated");
    r.count(prem.epis_are_isos ? "premise-epi-iso-held" : "premise-epi-iso-violated");
    if (is_pullback_square(sq)) {
      r.count("pullback");
    } else {
      r.fail("cellular-not-pullback",
             std::string("premises: pullback-stable ") + (prem.pullback_stable ? "held" : "violated") +
                 ", epi-iso " + (prem.epis_are_isos ? "held" : "violated"),
             Witness().structure(cs).notion("cellular").square("w", sq).json());
    }
  };
  CheckReport report = run_samples("cellular-implies-pullback", cfg, [&](Rng& rng, SampleResult& r) {
    classify(sample_cellular_square(rng, cs, cfg.caps), r);
  });
  auto builtin = [&](const std::string& name, const Square& sq) {
    SampleResult r;
    classify(sq, r);
    const bool bad = !r.failures.empty();
    report.add_builtin(name, bad, bad ? r.failures.front().detail : "pullback",
                       Witness().structure(cs).notion("cellular").square("w", sq).json(), "cellular-not-pullback");
  };
  builtin("identity_square", Square{identity(builtins::z()), identity(builtins::z()), identity(builtins::z()),
                                    identity(builtins::z())});
  builtin("free_pushout_square", builtins::indiscrete_pair().first);
  return report;
}

}  // namespace cellwork
