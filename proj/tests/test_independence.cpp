#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace cellwork;

namespace {

AbGroup Z() { return AbGroup::free(1); }

const CellularStructure kTorsionFree{TorsionFree{}};
const CellularStructure kAll{AllGroups{}};
const CellularStructure kPerp2{PerpOf{{AbGroup::cyclic(2)}}};
const Caps kCaps{};

IndependenceNotion cellular(const CellularStructure& cs) { return {NotionKind::Cellular, cs}; }
IndependenceNotion indiscrete(const CellularStructure& cs) { return {NotionKind::Indiscrete, cs}; }
IndependenceNotion pullbacks(const CellularStructure& cs) { return {NotionKind::Pullback, cs}; }

SuiteConfig config(const CellularStructure& cs, std::uint64_t samples, std::uint64_t seed = 7) {
  SuiteConfig cfg;
  cfg.cs = cs;
  cfg.samples = samples;
  cfg.seed = seed;
  return cfg;
}

Square identity_square() { return Square{identity(Z()), identity(Z()), identity(Z()), identity(Z())}; }

const std::vector<CellularStructure>& structures() {
  static const std::vector<CellularStructure> all{kTorsionFree, kPerp2, kAll};
  return all;
}

void expect_merge_contract(const IndependenceNotion& n, const Square& a, const Square& b, const Amalgam& m) {
  EXPECT_TRUE(hom_equal(compose(m.d1, a.v), compose(m.d2, b.v)));
  EXPECT_TRUE(hom_equal(compose(m.d1, a.u), compose(m.d2, b.u)));
  EXPECT_TRUE(in_M(m.d1, n.cs));
  EXPECT_TRUE(in_M(m.d2, n.cs));
  EXPECT_TRUE(is_independent(n, extend_square(a, m.d1)));
  EXPECT_TRUE(is_independent(n, extend_square(b, m.d2)));
}

}  // namespace

TEST(Notions, ParseAndName) {
  for (auto k : {NotionKind::Cellular, NotionKind::Indiscrete, NotionKind::Pullback})
    EXPECT_EQ(parse_notion(notion_name(k)), k);
  EXPECT_FALSE(parse_notion("stable").has_value());
}

TEST(IsIndependent, Examples) {
  Rng rng(1);
  for (int s = 0; s < 100; ++s) {
    Square sq = sample_mixed_square(rng, kTorsionFree, kCaps);
    EXPECT_TRUE(is_independent(indiscrete(kTorsionFree), sq));
  }
  Span sp = sample_m_span(rng, kTorsionFree, kCaps);
  EXPECT_TRUE(is_independent(cellular(kTorsionFree), pushout_square(pushout(sp))));
  EXPECT_FALSE(is_independent(cellular(kTorsionFree), builtins::reg_pullback()));
  EXPECT_TRUE(is_independent(pullbacks(kTorsionFree), builtins::reg_pullback()));
  Square bad{identity(Z()), identity(Z()), identity(Z()), Hom(Z(), Z(), IntMatrix::from_rows({{2}}))};
  EXPECT_THROW(is_independent(indiscrete(kAll), bad), PreconditionError);
}

TEST(Amalgamate, Examples) {
  AbGroup g = direct_sum(Z(), AbGroup::cyclic(5));
  Square ids = amalgamate(Span{identity(g), identity(g)}, kTorsionFree);
  EXPECT_EQ(ids.d().canon(), g.canon());
  EXPECT_TRUE(is_isomorphism(ids.u));
  EXPECT_TRUE(is_isomorphism(ids.v));
  EXPECT_TRUE(is_independent(cellular(kTorsionFree), ids));

  Square two = amalgamate(Span{zero_hom(zero_object(), Z()), zero_hom(zero_object(), Z())}, kTorsionFree);
  EXPECT_EQ(two.d().canon(), AbGroup::free(2).canon());

  EXPECT_THROW(amalgamate(Span{Hom(Z(), Z(), IntMatrix::from_rows({{2}})), identity(Z())}, kTorsionFree),
               PreconditionError);
}

TEST(Amalgamate, SampledSpansGiveIndependentSquares) {
  Rng rng(2);
  for (const auto& cs : structures())
    for (int s = 0; s < 500; ++s) {
      Span sp = sample_m_span(rng, cs, kCaps);
      Square sq = amalgamate(sp, cs);
      EXPECT_TRUE(in_M(sq.u, cs));
      EXPECT_TRUE(in_M(sq.v, cs));
      EXPECT_TRUE(is_cellular_square(sq, cs).is_cellular);
    }
}

TEST(UnifyAmalgams, Examples) {
  Rng rng(3);
  Span sp = sample_m_span(rng, kTorsionFree, kCaps);
  Square po = amalgamate(sp, kTorsionFree);
  Amalgam same = unify_amalgams(po, po, kTorsionFree);
  EXPECT_EQ(same.e.canon(), po.d().canon());
  EXPECT_TRUE(is_isomorphism(same.d1));
  EXPECT_TRUE(hom_equal(same.d1, same.d2));
  expect_merge_contract(cellular(kTorsionFree), po, po, same);

  Square padded = extend_square(po, inject_first(po.d(), Z()));
  Amalgam m = unify_amalgams(po, padded, kTorsionFree);
  Canon expected = po.d().canon();
  expected.free_rank += 1;
  EXPECT_EQ(m.e.canon(), expected);
  expect_merge_contract(cellular(kTorsionFree), po, padded, m);

  EXPECT_THROW(unify_amalgams(po, identity_square(), kTorsionFree), InputError);
  Square reg = builtins::reg_pullback();
  Square reg_po = amalgamate(reg.span(), kTorsionFree);
  EXPECT_THROW(unify_amalgams(reg_po, reg, kTorsionFree), PreconditionError);
}

TEST(UnifyAmalgams, SeededCellularPairs) {
  Rng rng(4);
  for (int s = 0; s < 300; ++s) {
    const CellularStructure& cs = structures()[static_cast<std::size_t>(s % 3)];
    Span sp = sample_m_span(rng, cs, kCaps);
    Square base = pushout_square(pushout(sp));
    Square a = extend_square(base, sample_m_extension(rng, base.d(), cs, kCaps));
    Square b = extend_square(base, sample_m_extension(rng, base.d(), cs, kCaps));
    Amalgam m = unify_amalgams(a, b, cs);
    expect_merge_contract(cellular(cs), a, b, m);
    EXPECT_FALSE(merge_violation(cellular(cs), a, b, m).has_value());
  }
}

TEST(Suites, WeakStabilityForCellularSquares) {
  for (const auto& cs : structures()) {
    const auto n = cellular(cs);
    const std::string name = class_name(cs.class_spec);
    EXPECT_EQ(verify_invariance(n, config(cs, 1000)).verdict(), Verdict::AllPassed) << name;
    EXPECT_EQ(verify_symmetry(n, config(cs, 1000)).verdict(), Verdict::AllPassed) << name;
    EXPECT_EQ(verify_existence(n, config(cs, 1000)).verdict(), Verdict::AllPassed) << name;
    EXPECT_EQ(verify_uniqueness(n, config(cs, 300)).verdict(), Verdict::AllPassed) << name;
    EXPECT_EQ(verify_transitivity(n, config(cs, 500)).verdict(), Verdict::AllPassed) << name;
  }
}

TEST(Suites, SamplersProduceBothVerdicts) {
  CheckReport r = verify_invariance(cellular(kTorsionFree), config(kTorsionFree, 400));
  EXPECT_GT(r.counters["independent"], 0);
  EXPECT_GT(r.counters["not-independent"], 0);
}

TEST(Suites, IndiscreteIsVacuouslyWeaklyStable) {
  const auto n = indiscrete(kTorsionFree);
  EXPECT_EQ(verify_invariance(n, config(kTorsionFree, 200)).verdict(), Verdict::AllPassed);
  EXPECT_EQ(verify_symmetry(n, config(kTorsionFree, 200)).verdict(), Verdict::AllPassed);
  EXPECT_EQ(verify_transitivity(n, config(kTorsionFree, 200)).verdict(), Verdict::AllPassed);
}

TEST(Invariance, IdentityExtensionIsAHarnessSelfTest) {
  Rng rng(5);
  for (int s = 0; s < 200; ++s) {
    Square sq = sample_mixed_square(rng, kTorsionFree, kCaps);
    const auto n = cellular(kTorsionFree);
    EXPECT_EQ(is_independent(n, sq), is_independent(n, extend_square(sq, identity(sq.d()))));
  }
}

TEST(Symmetry, RegressionSquareTransposeAlsoFails) {
  Square reg = builtins::reg_pullback();
  EXPECT_FALSE(is_cellular_square(transpose(reg), kTorsionFree).is_cellular);
  Rng rng(6);
  for (int s = 0; s < 50; ++s) {
    Square po = pushout_square(pushout(sample_m_span(rng, kTorsionFree, kCaps)));
    EXPECT_TRUE(is_cellular_square(transpose(po), kTorsionFree).is_cellular);
  }
}

TEST(Transitivity, Examples) {
  Rng rng(7);
  for (int s = 0; s < 50; ++s) {
    Span sp = sample_m_span(rng, kTorsionFree, kCaps);
    Square left = amalgamate(sp, kTorsionFree);
    Hom g2 = sample_m_arrow(rng, left.c(), kTorsionFree, kCaps);
    Square right = amalgamate(Span{left.u, g2}, kTorsionFree);
    PastedRectangle rect = paste(left, right);
    EXPECT_TRUE(is_cellular_square(rect.outer, kTorsionFree).is_cellular);

    Square left_padded = extend_square(left, inject_first(left.d(), Z()));
    Square right2 = amalgamate(Span{left_padded.u, g2}, kTorsionFree);
    Square right_padded = extend_square(right2, inject_first(right2.d(), Z()));
    PastedRectangle padded = paste(left_padded, right_padded);
    EXPECT_TRUE(is_cellular_square(padded.outer, kTorsionFree).is_cellular);
  }
}

TEST(Sequences, ShortLengths) {
  const auto n = cellular(kTorsionFree);
  Hom f = Hom(Z(), AbGroup::free(2), IntMatrix::from_rows({{1}, {0}}));
  IndependentSequence one = build_independent_sequence(f, 1, n);
  CheckReport r1 = verify_independent_sequence(one, n);
  EXPECT_EQ(r1.verdict(), Verdict::AllPassed);
  EXPECT_EQ(r1.counters.count("independence-checks"), 0u);
  EXPECT_EQ(one.objects.size(), 2u);

  IndependentSequence two = build_independent_sequence(f, 2, n);
  CheckReport r2 = verify_independent_sequence(two, n);
  EXPECT_EQ(r2.verdict(), Verdict::AllPassed);
  EXPECT_EQ(r2.counters.at("independence-checks"), 1);
  EXPECT_EQ(two.objects[1].canon(), AbGroup::free(3).canon());
}

TEST(Sequences, ZeroToZLengthThree) {
  const auto n = cellular(kTorsionFree);
  IndependentSequence s = zero_to_z_sequence(3, n);
  EXPECT_EQ(verify_independent_sequence(s, n).verdict(), Verdict::AllPassed);
  EXPECT_EQ(s.objects[1].canon(), AbGroup::free(2).canon());
  EXPECT_EQ(s.objects[2].canon(), AbGroup::free(3).canon());
  EXPECT_EQ(s.objects[3].canon(), AbGroup::free(4).canon());
  EXPECT_TRUE(is_cellular_square(s.square(1, 2), kTorsionFree).is_cellular);
  EXPECT_TRUE(is_cellular_square(s.square(0, 2), kTorsionFree).is_cellular);
  EXPECT_TRUE(is_cellular_square(s.square(0, 1), kTorsionFree).is_cellular);
  for (std::size_t j = 1; j <= 3; ++j) EXPECT_EQ(cokernel(s.arrows[j]).group.canon(), s.objects[j - 1].canon());
}

TEST(Sequences, RoundTripOverSeededBases) {
  Rng rng(8);
  for (const auto& cs : structures())
    for (std::size_t length = 1; length <= 6; ++length)
      for (int s = 0; s < 50; ++s) {
        AbGroup a = random_group(rng, kCaps);
        Hom f = sample_m_arrow(rng, a, cs, kCaps);
        IndependentSequence seq = build_independent_sequence(f, length, cellular(cs));
        CheckReport r = verify_independent_sequence(seq, cellular(cs));
        ASSERT_EQ(r.verdict(), Verdict::AllPassed) << (r.failures.empty() ? "" : r.failures[0].detail);
      }
}

TEST(Sequences, InjectedFaultsAreLocated) {
  const auto n = cellular(kTorsionFree);
  IndependentSequence s = zero_to_z_sequence(3, n);
  s.transitions.at({1, 2}) = zero_hom(s.objects[1], s.objects[2]);
  CheckReport r = verify_independent_sequence(s, n);
  ASSERT_FALSE(r.failures.empty());
  EXPECT_EQ(r.failures[0].kind, "functoriality");
  EXPECT_EQ(r.failures[0].detail.rfind("(0,1,2)", 0), 0u);

  CheckReport reg = verify_independent_sequence(regression_sequence(), n);
  ASSERT_EQ(reg.failures.size(), 1u);
  EXPECT_EQ(reg.failures[0].kind, "independence");
  EXPECT_EQ(reg.failures[0].detail.rfind("(0,1)", 0), 0u);
  EXPECT_EQ(verify_independent_sequence(regression_sequence(), pullbacks(kTorsionFree)).verdict(), Verdict::AllPassed);
}

TEST(Sequences, BuildRejectsBadInput) {
  EXPECT_THROW(build_independent_sequence(Hom(Z(), Z(), IntMatrix::from_rows({{2}})), 2, cellular(kTorsionFree)),
               PreconditionError);
  EXPECT_THROW(build_independent_sequence(identity(Z()), 0, cellular(kTorsionFree)), InputError);
  EXPECT_THROW(build_independent_sequence(identity(Z()), 2, indiscrete(kTorsionFree)), InputError);
}

TEST(Sequences, SuiteBuiltinsHold) {
  CheckReport r = verify_sequences(cellular(kTorsionFree), config(kTorsionFree, 120));
  EXPECT_EQ(r.verdict(), Verdict::AllPassed);
  for (const auto& b : r.builtins) EXPECT_FALSE(b.counterexample) << b.name << ": " << b.detail;
  for (std::size_t l = 1; l <= 6; ++l) EXPECT_EQ(r.counters.at("length-" + std::to_string(l)), 20);
}

TEST(Compare, ReflexiveAgreement) {
  CheckReport r = compare_notions(cellular(kTorsionFree), cellular(kTorsionFree), config(kTorsionFree, 500));
  EXPECT_EQ(r.verdict(), Verdict::AllPassed);
  EXPECT_EQ(r.counters.at("agree"), 500);
}

TEST(Compare, IndiscreteHasOnlySecondWitnesses) {
  CheckReport r = compare_notions(cellular(kTorsionFree), indiscrete(kTorsionFree), config(kTorsionFree, 200));
  EXPECT_EQ(r.verdict(), Verdict::CounterexamplesFound);
  EXPECT_GT(r.counters["only-n2"], 0);
  EXPECT_EQ(r.counters.count("only-n1"), 0u);
  EXPECT_TRUE(r.builtin_found("indiscrete_pair_collapsed"));
  EXPECT_GT(r.counters["merge-obstructed"], 0);

  Square collapsed = builtins::indiscrete_pair().second;
  CellularVerdict v = is_cellular_square(collapsed, kTorsionFree);
  EXPECT_EQ(v.pushout.p.canon(), AbGroup::free(2).canon());
  EXPECT_FALSE(is_mono(v.mediating));
  EXPECT_EQ(v.mediating.mat(), IntMatrix::from_rows({{1, 1}}));
}

TEST(Compare, PullbackSquaresContainCellularSquares) {
  CheckReport r = compare_notions(cellular(kTorsionFree), pullbacks(kTorsionFree), config(kTorsionFree, 300));
  EXPECT_EQ(r.counters.count("only-n1"), 0u);
  EXPECT_TRUE(r.builtin_found("reg_pullback"));
  for (const auto& f : r.failures) EXPECT_EQ(f.kind, "only-n2");

  CheckReport all = compare_notions(cellular(kAll), pullbacks(kAll), config(kAll, 300));
  EXPECT_EQ(all.counters.count("only-n1"), 0u);
}

TEST(Probe, CellularPairsMerge) {
  Rng rng(9);
  for (int s = 0; s < 300; ++s) {
    const CellularStructure& cs = structures()[static_cast<std::size_t>(s % 3)];
    Square base = pushout_square(pushout(sample_m_span(rng, cs, kCaps)));
    Square a = extend_square(base, sample_m_extension(rng, base.d(), cs, kCaps));
    Square b = extend_square(base, sample_m_extension(rng, base.d(), cs, kCaps));
    ProbeResult p = uniqueness_probe(cellular(cs), a, b, 2);
    ASSERT_TRUE(p.merged);
    EXPECT_EQ(p.method, "unify");
    expect_merge_contract(cellular(cs), a, b, *p.amalgam);
  }
}

TEST(Probe, IndiscretePairIsObstructed) {
  builtins::SquarePair pair = builtins::indiscrete_pair();
  const auto n = indiscrete(kTorsionFree);
  ProbeResult p = uniqueness_probe(n, pair.first, pair.second, 3);
  EXPECT_FALSE(p.merged);
  ASSERT_TRUE(p.obstruction.has_value());
  EXPECT_EQ(p.obstruction->first, 1);
  const IntVector x = p.obstruction->second;
  EXPECT_FALSE(pair.first.d().is_zero_element(x));
  EXPECT_EQ(x[0], -x[1]);
  EXPECT_FALSE(p.truncated);
  EXPECT_EQ(p.groups_searched, detail::probe_domain(3).size());

  // x = v1(1) - u1(1) while v2(1) = u2(1), so every agreeing pair kills x.
  EXPECT_TRUE(hom_equal(pair.second.v, pair.second.u));
  IntVector diff = oracle::difference(pair.first.v.mat().column_at(0), pair.first.u.mat().column_at(0));
  EXPECT_TRUE(diff == x || oracle::difference(IntVector(2, Integer(0)), diff) == x);

  CheckReport r = probe_report(n, pair.first, pair.second, 3);
  EXPECT_EQ(r.verdict(), Verdict::Inconclusive);
  EXPECT_TRUE(r.details.contains("obstruction"));
}

TEST(Probe, IdenticalSquaresMergeByIdentities) {
  builtins::SquarePair pair = builtins::indiscrete_pair();
  const auto n = indiscrete(kTorsionFree);
  ProbeResult p = uniqueness_probe(n, pair.second, pair.second, 1);
  ASSERT_TRUE(p.merged);
  EXPECT_TRUE(is_isomorphism(p.amalgam->d1));
  EXPECT_TRUE(hom_equal(p.amalgam->d1, p.amalgam->d2));
  expect_merge_contract(n, pair.second, pair.second, *p.amalgam);

  Square po = pair.first;
  ProbeResult q = uniqueness_probe(cellular(kTorsionFree), po, po, 1);
  ASSERT_TRUE(q.merged);
  EXPECT_TRUE(is_isomorphism(q.amalgam->d1));
  EXPECT_TRUE(hom_equal(q.amalgam->d1, q.amalgam->d2));
}

TEST(Probe, RejectsMismatchedOrDependentInputs) {
  builtins::SquarePair pair = builtins::indiscrete_pair();
  EXPECT_THROW(uniqueness_probe(indiscrete(kTorsionFree), pair.first, identity_square(), 1), InputError);
  EXPECT_THROW(uniqueness_probe(cellular(kTorsionFree), pair.first, pair.second, 1), PreconditionError);
}

TEST(Determinism, ReportsIndependentOfThreadCount) {
  SuiteConfig one = config(kTorsionFree, 150, 11);
  SuiteConfig many = one;
  many.threads = 4;
  const auto n = cellular(kTorsionFree);
  EXPECT_EQ(to_json(verify_invariance(n, one)).dump(), to_json(verify_invariance(n, many)).dump());
  EXPECT_EQ(to_json(check_effective_unions(one)).dump(), to_json(check_effective_unions(many)).dump());
  EXPECT_EQ(to_json(compare_notions(n, indiscrete(kTorsionFree), one)).dump(),
            to_json(compare_notions(n, indiscrete(kTorsionFree), many)).dump());
}

TEST(Determinism, SeedsDeriveFromSuiteAndIndex) {
  EXPECT_EQ(derive_seed(7, "coherence", 3), derive_seed(7, "coherence", 3));
  EXPECT_NE(derive_seed(7, "coherence", 3), derive_seed(7, "coherence", 4));
  EXPECT_NE(derive_seed(7, "coherence", 3), derive_seed(7, "symmetry", 3));
  EXPECT_NE(derive_seed(7, "coherence", 3), derive_seed(8, "coherence", 3));
}
