#pragma once

#include "cellwork/checks.hpp"

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cellwork {

enum class NotionKind { Cellular, Indiscrete, Pullback };

struct IndependenceNotion {
  NotionKind kind = NotionKind::Cellular;
  CellularStructure cs{TorsionFree{}};
};

inline const char* notion_name(NotionKind k) {
  switch (k) {
    case NotionKind::Cellular: return "cellular";
    case NotionKind::Indiscrete: return "indiscrete";
    case NotionKind::Pullback: return "pullback";
  }
  return "?";
}

inline std::optional<NotionKind> parse_notion(const std::string& s) {
  if (s == "cellular") return NotionKind::Cellular;
  if (s == "indiscrete") return NotionKind::Indiscrete;
  if (s == "pullback") return NotionKind::Pullback;
  return std::nullopt;
}

/// Squares must commute and have all four edges in M; anything else is rejected.
inline bool is_independent(const IndependenceNotion& n, const Square& sq) {
  require_valid_square(sq, n.cs);
  switch (n.kind) {
    case NotionKind::Cellular: return is_cellular_square(sq, n.cs).is_cellular;
    case NotionKind::Indiscrete: return true;
    case NotionKind::Pullback: return is_pullback_square(sq);
  }
  return false;
}

/// The pushout square of an M-span.
inline Square amalgamate(const Span& s, const CellularStructure& cs) {
  require_span(s);
  if (!in_M(s.f, cs)) throw PreconditionError("amalgamate: f is not in M");
  if (!in_M(s.g, cs)) throw PreconditionError("amalgamate: g is not in M");
  return pushout_square(pushout(s));
}

struct Amalgam {
  AbGroup e;
  Hom d1;  // D1 -> E
  Hom d2;  // D2 -> E
};

inline bool same_span(const Square& a, const Square& b) {
  return a.f.src() == b.f.src() && a.f.dst() == b.f.dst() && a.g.dst() == b.g.dst() && hom_equal(a.f, b.f) &&
         hom_equal(a.g, b.g);
}

inline void require_same_span(const Square& a, const Square& b) {
  if (!same_span(a, b)) throw InputError("the two squares do not share a span");
}

/// Merge two cellular squares over one span: E is the pushout of the two
/// mediating arrows P -> D1, P -> D2.
inline Amalgam unify_amalgams(const Square& sq1, const Square& sq2, const CellularStructure& cs) {
  require_same_span(sq1, sq2);
  CellularVerdict c1 = is_cellular_square(sq1, cs);
  CellularVerdict c2 = is_cellular_square(sq2, cs);
  if (!c1.is_cellular) throw PreconditionError("unify_amalgams: first square is not cellular");
  if (!c2.is_cellular) throw PreconditionError("unify_amalgams: second square is not cellular");
  PushoutResult po = pushout(sq1.span());
  Hom t1 = mediating_from_pushout(po, sq1.v, sq1.u);
  Hom t2 = mediating_from_pushout(po, sq2.v, sq2.u);
  PushoutResult e = pushout(Span{t1, t2});
  return Amalgam{e.p, e.into_b, e.into_c};
}

/// Contract of a merge: d1 v1 = d2 v2, d1 u1 = d2 u2, d1 and d2 in M, and
/// both extended squares independent. Returns the first violated clause.
inline std::optional<std::string> merge_violation(const IndependenceNotion& n, const Square& sq1, const Square& sq2,
                                                  const Amalgam& m) {
  if (!hom_equal(compose(m.d1, sq1.v), compose(m.d2, sq2.v))) return "d1 v1 != d2 v2";
  if (!hom_equal(compose(m.d1, sq1.u), compose(m.d2, sq2.u))) return "d1 u1 != d2 u2";
  if (!in_M(m.d1, n.cs)) return "d1 not in M";
  if (!in_M(m.d2, n.cs)) return "d2 not in M";
  if (!is_independent(n, extend_square(sq1, m.d1))) return "extended first square not independent";
  if (!is_independent(n, extend_square(sq2, m.d2))) return "extended second square not independent";
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Uniqueness probe

struct ProbeResult {
  bool merged = false;
  std::optional<Amalgam> amalgam;
  std::string method;  // "unify", "cocone" or "search"
  /// Nonzero element of D1 (side 1) or D2 (side 2) killed by every pair (d1, d2)
  /// agreeing over B and C; its presence rules out a mono merge.
  std::optional<std::pair<int, IntVector>> obstruction;
  std::size_t groups_searched = 0;
  std::uint64_t candidates = 0;
  bool truncated = false;
};

namespace detail {

/// Invariant-factor lists t_1 | t_2 | ... with entries in {2, 3, 4}, plus a
/// free rank, with at most `bound` cyclic factors in total.
inline std::vector<AbGroup> probe_domain(int bound) {
  std::vector<std::vector<int>> chains{{}};
  for (int len = 1; len <= bound; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& c : chains)
      if (static_cast<int>(c.size()) == len - 1)
        for (int t : {2, 3, 4})
          if (c.empty() || t % c.back() == 0) {
            auto d = c;
            d.push_back(t);
            next.push_back(d);
          }
    chains.insert(chains.end(), next.begin(), next.end());
  }
  std::vector<AbGroup> out;
  for (const auto& c : chains)
    for (int free = 0; free + static_cast<int>(c.size()) <= bound; ++free) {
      std::vector<Integer> torsion(c.begin(), c.end());
      out.push_back(AbGroup::from_invariants(static_cast<std::size_t>(free), torsion));
    }
  return out;
}

/// Enumerates integer combinations of generator matrices: finite-order
/// generators take every residue, infinite ones take [-range, range].
class Combinations {
 public:
  Combinations(const std::vector<HomGenerator>& gens, std::int64_t range) {
    for (const auto& g : gens) {
      if (g.order.is_zero()) {
        lo_.push_back(-range);
        hi_.push_back(range);
      } else {
        lo_.push_back(0);
        hi_.push_back(*g.order.to_int64() - 1);
      }
    }
    coeff_ = lo_;
  }

  std::uint64_t count() const {
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < lo_.size(); ++i) n *= static_cast<std::uint64_t>(hi_[i] - lo_[i] + 1);
    return n;
  }
  const std::vector<std::int64_t>& coefficients() const { return coeff_; }

  bool advance() {
    for (std::size_t i = 0; i < coeff_.size(); ++i) {
      if (coeff_[i] < hi_[i]) {
        ++coeff_[i];
        return true;
      }
      coeff_[i] = lo_[i];
    }
    return false;
  }

  IntMatrix combine(const std::vector<IntMatrix>& mats, std::size_t rows, std::size_t cols) const {
    IntMatrix m(rows, cols);
    for (std::size_t k = 0; k < mats.size(); ++k)
      if (coeff_[k] != 0) m = m + Integer(coeff_[k]) * mats[k];
    return m;
  }

 private:
  std::vector<std::int64_t> lo_, hi_, coeff_;
};

/// Key identifying the pair (d.v, d.u) as homs into E.
inline std::string merge_signature(const AbGroup& e, const IntMatrix& dv, const IntMatrix& du) {
  std::string key;
  for (const IntMatrix* m : {&dv, &du}) {
    for (std::size_t j = 0; j < m->cols(); ++j) {
      for (const auto& x : e.canonical_coordinates(m->column_at(j))) key += x.str() + ",";
      key += ";";
    }
    key += "|";
  }
  return key;
}

}  // namespace detail

/// Tries to merge two independent squares over a common span into a common
/// independent amalgam. Cellular pairs go through unify_amalgams; otherwise the
/// universal pair (w1, w2) into the pushout of D1 <- B + C -> D2 is tried, then a
/// bounded search over groups E from probe_domain(bound). With
/// `search_if_obstructed` false the search is skipped once an obstruction is known.
inline ProbeResult uniqueness_probe(const IndependenceNotion& n, const Square& sq1, const Square& sq2, int bound,
                                    bool search_if_obstructed = true, std::uint64_t max_candidates = 20'000'000) {
  require_same_span(sq1, sq2);
  if (!is_independent(n, sq1)) throw PreconditionError("uniqueness_probe: first square is not independent");
  if (!is_independent(n, sq2)) throw PreconditionError("uniqueness_probe: second square is not independent");
  ProbeResult out;
  if (is_cellular_square(sq1, n.cs).is_cellular && is_cellular_square(sq2, n.cs).is_cellular) {
    Amalgam m = unify_amalgams(sq1, sq2, n.cs);
    if (!merge_violation(n, sq1, sq2, m)) {
      out.merged = true;
      out.method = "unify";
      out.amalgam = std::move(m);
      return out;
    }
  }

  // Every merge factors through W, so a kernel element of w_i is killed by every d_i.
  const AbGroup b = sq1.b();
  const AbGroup c = sq1.c();
  const AbGroup bc = direct_sum(b, c);
  Hom s1(bc, sq1.d(), hstack(sq1.v.mat(), sq1.u.mat()));
  Hom s2(bc, sq2.d(), hstack(sq2.v.mat(), sq2.u.mat()));
  PushoutResult w = pushout(Span{s1, s2});
  for (int side : {1, 2}) {
    const Hom& wi = side == 1 ? w.into_b : w.into_c;
    if (is_mono(wi)) continue;
    KernelResult k = kernel(wi);
    for (std::size_t j = 0; j < k.inclusion.mat().cols(); ++j) {
      IntVector x = k.inclusion.mat().column_at(j);
      if (!wi.src().is_zero_element(x)) {
        out.obstruction = std::make_pair(side, std::move(x));
        break;
      }
    }
    if (out.obstruction) break;
  }
  if (!out.obstruction) {
    Amalgam m{w.p, w.into_b, w.into_c};
    if (!merge_violation(n, sq1, sq2, m)) {
      out.merged = true;
      out.method = "cocone";
      out.amalgam = std::move(m);
      return out;
    }
  }
  if (out.obstruction && !search_if_obstructed) return out;

  for (const AbGroup& e : detail::probe_domain(bound)) {
    ++out.groups_searched;
    const auto gens1 = hom_group(sq1.d(), e);
    const auto gens2 = hom_group(sq2.d(), e);
    std::vector<IntMatrix> m1, m2;
    for (const auto& g : gens1) m1.push_back(g.hom.mat());
    for (const auto& g : gens2) m2.push_back(g.hom.mat());
    detail::Combinations it2(gens2, 3);
    detail::Combinations it1(gens1, 3);
    if (out.candidates + it1.count() + it2.count() > max_candidates) {
      out.truncated = true;
      continue;
    }
    std::unordered_map<std::string, std::vector<IntMatrix>> by_signature;
    do {
      IntMatrix d2 = it2.combine(m2, e.n_gens(), sq2.d().n_gens());
      ++out.candidates;
      by_signature[detail::merge_signature(e, d2 * sq2.v.mat(), d2 * sq2.u.mat())].push_back(std::move(d2));
    } while (it2.advance());
    do {
      IntMatrix d1 = it1.combine(m1, e.n_gens(), sq1.d().n_gens());
      ++out.candidates;
      auto hit = by_signature.find(detail::merge_signature(e, d1 * sq1.v.mat(), d1 * sq1.u.mat()));
      if (hit == by_signature.end()) continue;
      Hom h1(sq1.d(), e, d1);
      if (!in_M(h1, n.cs)) continue;
      for (const auto& d2 : hit->second) {
        Amalgam m{e, h1, Hom(sq2.d(), e, d2)};
        if (merge_violation(n, sq1, sq2, m)) continue;
        out.merged = true;
        out.method = "search";
        out.amalgam = std::move(m);
        return out;
      }
    } while (it1.advance());
  }
  return out;
}

inline Json to_json(const ProbeResult& p) {
  Json j{{"merged", p.merged}};
  if (!p.method.empty()) j["method"] = p.method;
  if (p.amalgam) {
    j["E"] = to_json(p.amalgam->e);
    j["E_canon"] = to_json(p.amalgam->e.canon());
    j["d1"] = to_json(p.amalgam->d1.mat());
    j["d2"] = to_json(p.amalgam->d2.mat());
  }
  if (p.obstruction) {
    j["obstruction"] = Json{{"in", p.obstruction->first == 1 ? "D1" : "D2"},
                            {"element", to_json(p.obstruction->second)},
                            {"reason", "killed by every pair agreeing over B and C, so no merge arrow is mono"}};
  }
  j["groups_searched"] = p.groups_searched;
  j["candidates"] = p.candidates;
  j["truncated"] = p.truncated;
  return j;
}

/// Report form: all-passed when a merge is found, inconclusive otherwise.
inline CheckReport probe_report(const IndependenceNotion& n, const Square& sq1, const Square& sq2, int bound) {
  CheckReport r;
  r.suite = "uniqueness-probe";
  r.samples = 1;
  r.samples_run = 1;
  ProbeResult p = uniqueness_probe(n, sq1, sq2, bound);
  r.counters[p.merged ? "merged" : "not-merged"] = 1;
  r.undetermined = !p.merged;
  r.details = to_json(p);
  r.details["bound"] = bound;
  return r;
}

// ---------------------------------------------------------------------------
// Weak stability suites

namespace detail {

inline Json square_witness(const IndependenceNotion& n, const Square& sq, const std::string& name = "w") {
  return Witness().structure(n.cs).notion(notion_name(n.kind)).square(name, sq).json();
}

inline Json square_pair_witness(const IndependenceNotion& n, const Square& a, const Square& b) {
  return Witness()
      .structure(n.cs)
      .notion(notion_name(n.kind))
      .square("first", a, "1.")
      .square("second", b, "2.")
      .json();
}

inline SuiteConfig with_structure(SuiteConfig cfg, const IndependenceNotion& n) {
  cfg.cs = n.cs;
  return cfg;
}

}  // namespace detail

/// (A,B,C,D) independent iff (A,B,C,E) independent, for D -> E in M.
inline CheckReport verify_invariance(const IndependenceNotion& n, const SuiteConfig& cfg) {
  auto classify = [&](const Square& sq, const Hom& e, SampleResult& r) {
    Square ext = extend_square(sq, e);
    const bool before = is_independent(n, sq);
    const bool after = is_independent(n, ext);
    r.count(before ? "independent" : "not-independent");
    if (before && !after) r.fail("forward", "independent square lost independence after extension",
                                 detail::square_pair_witness(n, sq, ext));
    if (!before && after) r.fail("backward", "extension made a non-independent square independent",
                                 detail::square_pair_witness(n, sq, ext));
  };
  CheckReport report = run_samples("invariance", detail::with_structure(cfg, n), [&](Rng& rng, SampleResult& r) {
    Square sq = sample_mixed_square(rng, n.cs, cfg.caps);
    classify(sq, sample_m_extension(rng, sq.d(), n.cs, cfg.caps), r);
  });
  const Square reg = builtins::reg_pullback(detail::witness_prime(n.cs));
  for (const auto& [name, e] : {std::pair<std::string, Hom>{"reg_pullback_identity", identity(reg.d())},
                                {"reg_pullback_free_summand", inject_first(reg.d(), builtins::z())}}) {
    SampleResult r;
    classify(reg, e, r);
    report.add_builtin(name, !r.failures.empty(), r.counters.count("independent") ? "independent" : "not independent",
                       detail::square_pair_witness(n, reg, extend_square(reg, e)), "invariance");
  }
  return report;
}

/// Verdict unchanged under transposition.
inline CheckReport verify_symmetry(const IndependenceNotion& n, const SuiteConfig& cfg) {
  auto classify = [&](const Square& sq, SampleResult& r) {
    const bool a = is_independent(n, sq);
    const bool b = is_independent(n, transpose(sq));
    r.count(a ? "independent" : "not-independent");
    if (a != b) r.fail("asymmetric", a ? "transpose not independent" : "only transpose independent",
                       detail::square_witness(n, sq));
  };
  CheckReport report = run_samples("symmetry", detail::with_structure(cfg, n), [&](Rng& rng, SampleResult& r) {
    classify(sample_mixed_square(rng, n.cs, cfg.caps), r);
  });
  const Square reg = builtins::reg_pullback(detail::witness_prime(n.cs));
  SampleResult r;
  classify(reg, r);
  report.add_builtin("reg_pullback", !r.failures.empty(),
                     r.counters.count("independent") ? "independent, transpose agrees"
                                                     : "not independent, transpose agrees",
                     detail::square_witness(n, reg), "asymmetric");
  return report;
}

/// Every M-span has an independent amalgam.
inline CheckReport verify_existence(const IndependenceNotion& n, const SuiteConfig& cfg) {
  auto classify = [&](const Span& s, SampleResult& r) {
    Square sq = amalgamate(s, n.cs);
    if (!in_M(sq.u, n.cs) || !in_M(sq.v, n.cs)) {
      r.fail("amalgam-edge-not-in-M", "pushout injection outside M", detail::square_witness(n, sq));
      return;
    }
    if (is_independent(n, sq)) {
      r.count("independent");
    } else {
      r.fail("amalgam-not-independent", "", detail::square_witness(n, sq));
    }
  };
  CheckReport report = run_samples("existence", detail::with_structure(cfg, n), [&](Rng& rng, SampleResult& r) {
    classify(sample_m_span(rng, n.cs, cfg.caps), r);
  });
  auto builtin = [&](const std::string& name, const Span& s) {
    SampleResult r;
    classify(s, r);
    report.add_builtin(name, !r.failures.empty(),
                       "amalgam " + amalgamate(s, n.cs).d().canon().str(),
                       Witness().structure(n.cs).notion(notion_name(n.kind)).span("w", s).json(), "existence");
  };
  builtin("identity_span", Span{identity(builtins::z()), identity(builtins::z())});
  builtin("free_span", builtins::indiscrete_pair().first.span());
  return report;
}

/// Two independent amalgams of one span merge into a common independent amalgam.
inline CheckReport verify_uniqueness(const IndependenceNotion& n, const SuiteConfig& cfg) {
  auto classify = [&](const Square& a, const Square& b, SampleResult& r) {
    ProbeResult p = uniqueness_probe(n, a, b, cfg.bound, false);
    if (p.merged) {
      r.count("merged-" + p.method);
    } else {
      r.fail("no-merge", p.obstruction ? "obstructed" : "bounded search exhausted",
             detail::square_pair_witness(n, a, b));
    }
  };
  CheckReport report = run_samples("uniqueness", detail::with_structure(cfg, n), [&](Rng& rng, SampleResult& r) {
    Span s = sample_m_span(rng, n.cs, cfg.caps);
    Square base = amalgamate(s, n.cs);
    auto perturb = [&](const Square& sq) {
      Hom e = sample_m_extension(rng, sq.d(), n.cs, cfg.caps);
      e = compose(random_presentation_change(rng, e.dst()), e);
      return extend_square(sq, e);
    };
    Square a = perturb(base);
    Square b = perturb(base);
    if (!is_independent(n, a) || !is_independent(n, b)) {
      r.count("vacuous");
      return;
    }
    classify(a, b, r);
  });
  const Square po = builtins::indiscrete_pair().first;
  for (const auto& [name, other] :
       {std::pair<std::string, Square>{"pushout_twice", po},
        {"pushout_free_summand", extend_square(po, inject_first(po.d(), builtins::z()))}}) {
    SampleResult r;
    classify(po, other, r);
    report.add_builtin(name, !r.failures.empty(), r.failures.empty() ? "merged" : r.failures.front().detail,
                       detail::square_pair_witness(n, po, other), "no-merge");
  }
  return report;
}

/// Pasting two independent squares along an edge gives an independent rectangle.
///
///   B --v--> D --x--> F
///   |f       |u       |w
///   A --g--> C --g'-> E
struct PastedRectangle {
  Square left;   // over (f, g)
  Square right;  // over (u, g')
  Square outer;  // over (f, g' g)
};

inline PastedRectangle paste(const Square& left, const Square& right) {
  Square outer{left.f, compose(right.g, left.g), right.u, compose(right.v, left.v)};
  return PastedRectangle{left, right, std::move(outer)};
}

inline PastedRectangle sample_pasted_rectangle(Rng& rng, const CellularStructure& cs, const Caps& caps) {
  Square left = sample_cellular_square(rng, cs, caps);
  Hom g2 = sample_m_arrow(rng, left.c(), cs, caps);
  PushoutResult po = pushout(Span{left.u, g2});
  Square right = extend_square(pushout_square(po), sample_m_extension(rng, po.p, cs, caps));
  return paste(left, right);
}

inline CheckReport verify_transitivity(const IndependenceNotion& n, const SuiteConfig& cfg) {
  auto classify = [&](const PastedRectangle& p, SampleResult& r) {
    if (!is_independent(n, p.left) || !is_independent(n, p.right)) {
      r.count("vacuous");
      return;
    }
    if (is_independent(n, p.outer)) {
      r.count("outer-independent");
    } else {
      r.fail("outer-not-independent", "",
             Witness()
                 .structure(n.cs)
                 .notion(notion_name(n.kind))
                 .square("left", p.left, "l.")
                 .square("right", p.right, "r.")
                 .square("outer", p.outer, "o.")
                 .json());
    }
  };
  CheckReport report = run_samples("transitivity", detail::with_structure(cfg, n), [&](Rng& rng, SampleResult& r) {
    classify(sample_pasted_rectangle(rng, n.cs, cfg.caps), r);
  });
  const Square po = builtins::indiscrete_pair().first;
  const Hom g2 = inject_first(builtins::z(), builtins::z());
  const PushoutResult right_po = pushout(Span{po.u, g2});
  const Square right = pushout_square(right_po);
  for (const auto& [name, rect] :
       {std::pair<std::string, PastedRectangle>{"two_pushouts", paste(po, right)},
        {"free_summands", paste(extend_square(po, inject_first(po.d(), builtins::z())),
                                [&] {
                                  Square l = extend_square(po, inject_first(po.d(), builtins::z()));
                                  PushoutResult rp = pushout(Span{l.u, g2});
                                  return extend_square(pushout_square(rp), inject_first(rp.p, builtins::z()));
                                }())}}) {
    SampleResult r;
    classify(rect, r);
    report.add_builtin(name, !r.failures.empty(), r.failures.empty() ? "outer independent" : "outer not independent",
                       Witness().structure(n.cs).notion(notion_name(n.kind)).square("outer", rect.outer).json(),
                       "outer-not-independent");
  }
  return report;
}

// ---------------------------------------------------------------------------
// Independent sequences

/// Finite independent sequence of length alpha for f0: M0 -> M.
///   objects[i] = N_i (N_0 = M), arrows[i] = f_i: M -> N_i for i >= 1 (arrows[0] unused, equal to id_M),
///   transitions[{i, j}] = g_{i,j}: N_i -> N_j for i <= j, all stored explicitly.
struct IndependentSequence {
  std::size_t length = 0;
  Hom base;
  std::vector<AbGroup> objects;
  std::vector<Hom> arrows;
  std::map<std::pair<std::size_t, std::size_t>, Hom> transitions;

  const Hom& g(std::size_t i, std::size_t j) const {
    auto it = transitions.find({i, j});
    if (it == transitions.end())
      throw InputError("sequence: missing transition g(" + std::to_string(i) + "," + std::to_string(j) + ")");
    return it->second;
  }

  /// The square at (i, j): f = g_{0,i} f0, g = f0, u = f_j, v = g_{i,j}.
  Square square(std::size_t i, std::size_t j) const {
    return Square{compose(g(0, i), base), base, arrows.at(j), g(i, j)};
  }
};

/// Repeated amalgamation: N_{i+1} is the pushout of (g_{0,i} f0, f0).
inline IndependentSequence build_independent_sequence(const Hom& f, std::size_t length, const IndependenceNotion& n) {
  if (length < 1) throw InputError("sequence length must be at least 1");
  if (n.kind == NotionKind::Indiscrete)
    throw InputError("build_independent_sequence: the indiscrete notion has no constructive amalgamation");
  if (!in_M(f, n.cs)) throw PreconditionError("build_independent_sequence: base arrow is not in M");
  IndependentSequence seq{length, f, {f.dst()}, {identity(f.dst())}, {}};
  seq.transitions.emplace(std::make_pair(0, 0), identity(f.dst()));
  for (std::size_t i = 0; i < length; ++i) {
    Square sq = amalgamate(Span{compose(seq.g(0, i), f), f}, n.cs);
    seq.objects.push_back(sq.d());
    seq.arrows.push_back(sq.u);
    seq.transitions.emplace(std::make_pair(i + 1, i + 1), identity(sq.d()));
    for (std::size_t k = 0; k <= i; ++k) seq.transitions.emplace(std::make_pair(k, i + 1), compose(sq.v, seq.g(k, i)));
  }
  return seq;
}

inline Witness& add_sequence(Witness& w, const std::string& name, const IndependentSequence& s) {
  w.hom("f0", s.base, "M0", "N0");
  Json objects = Json::array();
  for (std::size_t i = 0; i < s.objects.size(); ++i) {
    w.group("N" + std::to_string(i), s.objects[i]);
    objects.push_back("N" + std::to_string(i));
  }
  Json arrows = Json::array();
  for (std::size_t i = 1; i < s.arrows.size(); ++i) {
    w.hom("f" + std::to_string(i), s.arrows[i], "N0", "N" + std::to_string(i));
    arrows.push_back("f" + std::to_string(i));
  }
  Json transitions = Json::array();
  for (const auto& [ij, h] : s.transitions) {
    const std::string hn = "g" + std::to_string(ij.first) + "_" + std::to_string(ij.second);
    w.hom(hn, h, "N" + std::to_string(ij.first), "N" + std::to_string(ij.second));
    transitions.push_back(Json::array({ij.first, ij.second, hn}));
  }
  w.raw("sequences", name,
        Json{{"length", s.length}, {"base", "f0"}, {"objects", objects}, {"arrows", arrows},
             {"transitions", transitions}});
  return w;
}

/// Checks shape, functoriality, commutation (i < j <= alpha) and independence (i < j < alpha),
/// reporting the first failing index tuple of each category.
inline CheckReport verify_independent_sequence(const IndependentSequence& s, const IndependenceNotion& n) {
  CheckReport r;
  r.suite = "sequence";
  r.samples = 1;
  r.samples_run = 1;
  const std::size_t a = s.length;
  Witness w;
  w.structure(n.cs).notion(notion_name(n.kind));
  Json witness = add_sequence(w, "seq", s).json();
  auto fail = [&](const std::string& kind, const std::string& where, const std::string& why) {
    r.failures.push_back(Failure{std::nullopt, "", kind, where + ": " + why, witness});
  };
  auto idx = [](std::initializer_list<std::size_t> xs) {
    std::string out = "(";
    for (auto it = xs.begin(); it != xs.end(); ++it) out += (it == xs.begin() ? "" : ",") + std::to_string(*it);
    return out + ")";
  };
  if (s.objects.size() != a + 1 || s.arrows.size() != a + 1 || !(s.objects[0] == s.base.dst())) {
    fail("shape", "sequence", "expected " + std::to_string(a + 1) + " objects and arrows with N_0 = M");
    return r;
  }
  for (std::size_t i = 0; i <= a; ++i)
    for (std::size_t j = i; j <= a; ++j) {
      auto it = s.transitions.find({i, j});
      if (it == s.transitions.end() || !(it->second.src() == s.objects[i]) || !(it->second.dst() == s.objects[j])) {
        fail("shape", idx({i, j}), "transition missing or with wrong endpoints");
        return r;
      }
    }
  for (std::size_t j = 1; j <= a; ++j)
    if (!(s.arrows[j].src() == s.base.dst()) || !(s.arrows[j].dst() == s.objects[j])) {
      fail("shape", idx({j}), "arrow f_j must map M to N_j");
      return r;
    }

  bool found = false;
  for (std::size_t i = 0; i <= a && !found; ++i)
    if (!hom_equal(s.g(i, i), identity(s.objects[i]))) {
      fail("functoriality", idx({i, i}), "g(i,i) is not the identity");
      found = true;
    }
  for (std::size_t i = 0; i <= a && !found; ++i)
    for (std::size_t j = i; j <= a && !found; ++j)
      for (std::size_t k = j; k <= a && !found; ++k) {
        r.counters["functoriality-checks"]++;
        if (!hom_equal(compose(s.g(j, k), s.g(i, j)), s.g(i, k))) {
          fail("functoriality", idx({i, j, k}), "g(j,k) g(i,j) != g(i,k)");
          found = true;
        }
      }
  found = false;
  for (std::size_t i = 0; i <= a && !found; ++i)
    for (std::size_t j = i + 1; j <= a && !found; ++j) {
      r.counters["commutation-checks"]++;
      if (!square_commutes(s.square(i, j))) {
        fail("commutation", idx({i, j}), "f_j f0 != g(i,j) g(0,i) f0");
        found = true;
      }
    }
  found = false;
  for (std::size_t i = 0; i < a && !found; ++i)
    for (std::size_t j = i + 1; j < a && !found; ++j) {
      r.counters["independence-checks"]++;
      Square sq = s.square(i, j);
      std::string why;
      try {
        if (!is_independent(n, sq)) why = "square not independent";
      } catch (const PreconditionError& e) {
        why = e.what();
      }
      if (!why.empty()) {
        fail("independence", idx({i, j}), why);
        found = true;
      }
    }
  return r;
}

/// The length-2 sequence over 0 -> Z whose single constrained square is reg_pullback(p).
inline IndependentSequence regression_sequence(int p = 2) {
  const Square reg = builtins::reg_pullback(p);
  IndependentSequence s{2, reg.g, {reg.c(), reg.d(), reg.d()}, {identity(reg.c()), reg.u, reg.u}, {}};
  s.transitions.emplace(std::make_pair(0, 0), identity(reg.c()));
  s.transitions.emplace(std::make_pair(1, 1), identity(reg.d()));
  s.transitions.emplace(std::make_pair(2, 2), identity(reg.d()));
  s.transitions.emplace(std::make_pair(0, 1), reg.v);
  s.transitions.emplace(std::make_pair(0, 2), reg.v);
  s.transitions.emplace(std::make_pair(1, 2), identity(reg.d()));
  return s;
}

inline IndependentSequence zero_to_z_sequence(std::size_t length, const IndependenceNotion& n) {
  return build_independent_sequence(zero_hom(zero_object(), builtins::z()), length, n);
}

/// Sample i builds and verifies a sequence of length 1 + i mod 6.
inline CheckReport verify_sequences(const IndependenceNotion& n, const SuiteConfig& cfg) {
  CheckReport report =
      run_samples("sequences", detail::with_structure(cfg, n), [&](Rng& rng, SampleResult& r, std::size_t i) {
        const std::size_t length = 1 + i % 6;
        AbGroup a = random_group(rng, cfg.caps);
        Hom f = sample_m_arrow(rng, a, n.cs, cfg.caps);
        IndependentSequence seq = build_independent_sequence(f, length, n);
        CheckReport v = verify_independent_sequence(seq, n);
        r.count("length-" + std::to_string(length));
        for (auto& fl : v.failures) r.fail(fl.kind, fl.detail, fl.witness);
      });

  {
    IndependentSequence s = zero_to_z_sequence(3, n);
    CheckReport v = verify_independent_sequence(s, n);
    const bool canon_ok = s.objects[2].canon() == Canon{3, {}};
    const bool diamonds = is_cellular_square(s.square(1, 2), n.cs).is_cellular &&
                          is_cellular_square(s.square(0, 2), n.cs).is_cellular;
    const bool ok = v.failures.empty() && canon_ok && diamonds;
    Witness w;
    w.structure(n.cs).notion(notion_name(n.kind));
    report.add_builtin("zero_to_z_length3", !ok,
                       "N2 = " + s.objects[2].canon().str() + (diamonds ? ", diamonds cellular" : ", diamond not cellular"),
                       add_sequence(w, "seq", s).json(), "sequence");
  }
  {
    IndependentSequence s = zero_to_z_sequence(3, n);
    s.transitions.at({1, 2}) = zero_hom(s.objects[1], s.objects[2]);
    CheckReport v = verify_independent_sequence(s, n);
    const bool detected = !v.failures.empty() && v.failures.front().kind == "functoriality" &&
                          v.failures.front().detail.rfind("(0,1,2)", 0) == 0;
    Witness w;
    w.structure(n.cs).notion(notion_name(n.kind));
    report.add_builtin("zero_transition_fault", !detected,
                       v.failures.empty() ? "fault not detected" : v.failures.front().kind + " " + v.failures.front().detail,
                       add_sequence(w, "seq", s).json(), "verifier-missed-fault");
  }
  {
    const int p = detail::witness_prime(n.cs);
    IndependentSequence s = regression_sequence(p);
    CheckReport v = verify_independent_sequence(s, n);
    bool independent = true;
    try {
      independent = is_independent(n, s.square(0, 1));
    } catch (const PreconditionError&) {
      independent = false;
    }
    // The verifier must flag (0,1) exactly when the square is not independent.
    const bool flagged = !v.failures.empty() && v.failures.front().kind == "independence" &&
                         v.failures.front().detail.rfind("(0,1)", 0) == 0;
    Witness w;
    w.structure(n.cs).notion(notion_name(n.kind));
    report.add_builtin("regression_sequence", flagged == independent,
                       v.failures.empty() ? "no failure" : v.failures.front().kind + " " + v.failures.front().detail,
                       add_sequence(w, "seq", s).json(), "verifier-mismatch");
  }
  return report;
}

// ---------------------------------------------------------------------------
// Comparing notions

/// Classifies squares valid for both notions into agree / only-n1 / only-n2 and
/// replays the one-directional merge for each n2-independent square.
inline CheckReport compare_notions(const IndependenceNotion& n1, const IndependenceNotion& n2,
                                   const SuiteConfig& cfg) {
  if (n1.cs.class_spec.index() != n2.cs.class_spec.index())
    throw InputError("compare_notions: notions must share a cellular structure");
  auto classify = [&](const Square& sq, SampleResult& r) {
    const bool a = is_independent(n1, sq);
    const bool b = is_independent(n2, sq);
    if (a == b) {
      r.count("agree");
    } else {
      r.count(a ? "only-n1" : "only-n2");
      r.fail(a ? "only-n1" : "only-n2",
             std::string(notion_name(n1.kind)) + " " + (a ? "yes" : "no") + ", " + notion_name(n2.kind) + " " +
                 (b ? "yes" : "no"),
             detail::square_witness(n1, sq));
    }
    if (!b) return;
    Square amalgam = amalgamate(sq.span(), n1.cs);
    ProbeResult p = uniqueness_probe(n2, amalgam, sq, cfg.bound, false, 200'000);
    r.count(p.merged ? "merge-found" : (p.obstruction ? "merge-obstructed" : "merge-inconclusive"));
  };
  CheckReport report = run_samples("compare", cfg, [&](Rng& rng, SampleResult& r) {
    classify(sample_mixed_square(rng, n1.cs, cfg.caps), r);
  });
  auto builtin = [&](const std::string& name, const Square& sq) {
    SampleResult r;
    classify(sq, r);
    report.add_builtin(name, !r.failures.empty(), r.failures.empty() ? "agree" : r.failures.front().detail,
                       detail::square_witness(n1, sq), r.failures.empty() ? "" : r.failures.front().kind);
  };
  builtin("indiscrete_pair_collapsed", builtins::indiscrete_pair().second);
  builtin("reg_pullback", builtins::reg_pullback(detail::witness_prime(n1.cs)));
  return report;
}

}  // namespace cellwork
