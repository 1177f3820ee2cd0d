#include "oracles.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using namespace cellwork;

namespace {

std::string instance(const std::string& rel) { return std::string(CELLWORK_INSTANCES) + "/" + rel; }

struct CliRun {
  int exit_code = -1;
  std::string out;
};

CliRun run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" + CELLWORK_CLI + "' " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<Json> lines(const std::string& out) {
  std::vector<Json> v;
  std::istringstream in(out);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) v.push_back(Json::parse(line));
  return v;
}

Json query(const InstanceFile& f, std::vector<std::string> args) { return run_query(f, args).at("result"); }

}  // namespace

TEST(Load, BuiltinInstanceIsValid) {
  InstanceFile f = load_instance_file(instance("builtin.json"));
  EXPECT_TRUE(f.diagnostics.empty());
  EXPECT_EQ(f.groups.size(), 9u);
  EXPECT_EQ(f.squares.size(), 4u);
  EXPECT_EQ(f.sequences.size(), 1u);
  EXPECT_EQ(f.group("Z_plus_Z2").canon(), (Canon{1, {2}}));
  for (const char* other : {"indiscrete.json", "perp_z2.json", "all_groups.json"})
    EXPECT_TRUE(load_instance_file(instance(other)).diagnostics.empty()) << other;
  EXPECT_EQ(load_instance_file(instance("indiscrete.json")).notion, NotionKind::Indiscrete);
  EXPECT_TRUE(std::holds_alternative<AllGroups>(load_instance_file(instance("all_groups.json")).cs.class_spec));
}

TEST(Load, FaultsProduceDiagnostics) {
  InstanceFile bad = load_instance_file(instance("faults/ill_defined_hom.json"));
  ASSERT_EQ(bad.diagnostics.size(), 1u);
  EXPECT_EQ(bad.diagnostics[0].entity, "homs.bad");
  EXPECT_EQ(bad.diagnostics[0].invariant, "well-defined");

  InstanceFile twisted = load_instance_file(instance("faults/non_commuting_square.json"));
  ASSERT_EQ(twisted.diagnostics.size(), 1u);
  EXPECT_EQ(twisted.diagnostics[0].entity, "squares.twisted");
  EXPECT_EQ(twisted.diagnostics[0].invariant, "commutes");
}

TEST(Load, SyntaxErrorsCarryPosition) {
  try {
    load_instance_file(instance("faults/syntax_error.json"));
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5u);
    EXPECT_EQ(e.column(), 3u);
  }
  EXPECT_THROW(load_instance_file(instance("missing.json")), InputError);
  EXPECT_THROW(load_instance_text(R"({"format": "other/9"})"), InputError);
}

TEST(Load, RejectsUnknownReferences) {
  const char* text = R"({"format": "cellwork/1",
    "groups": {"Z": {"gens": 1, "rels": []}},
    "homs": {"h": {"src": "Z", "dst": "Q", "mat": [["1"]]}}})";
  EXPECT_THROW(load_instance_text(text), InputError);
}

TEST(Query, Examples) {
  InstanceFile f = load_instance_file(instance("builtin.json"));
  Json ext = query(f, {"ext1", "Z4", "Z6"});
  EXPECT_EQ(ext.at("canon").at("torsion"), Json::array({"2"}));
  EXPECT_EQ(query(f, {"ext1", "Z", "Z6"}).at("canon").at("torsion"), Json::array());

  Json po = query(f, {"pushout", "span_id"});
  EXPECT_TRUE(po.is_object());

  Json reg = query(f, {"cellular-square", "reg_pullback"});
  EXPECT_EQ(reg.at("is_cellular"), false);
  EXPECT_EQ(query(f, {"cellular-square", "free_pushout"}).at("is_cellular"), true);

  Json coker = query(f, {"coker", "times2"});
  EXPECT_EQ(coker.at("canon").at("torsion"), Json::array({"2"}));
  EXPECT_EQ(query(f, {"in-m", "times2"}).at("in_M"), false);
  EXPECT_EQ(query(f, {"in-m", "incl_10"}).at("in_M"), true);
  EXPECT_EQ(query(f, {"is-independent", "reg_pullback"}).at("independent"), false);

  EXPECT_THROW(query(f, {"frobnicate"}), InputError);
  EXPECT_THROW(query(f, {"canon", "nope"}), InputError);
  EXPECT_THROW(query(f, {"canon"}), InputError);
}

TEST(Query, MediatingCokernelOfRegressionSquare) {
  InstanceFile f = load_instance_file(instance("builtin.json"));
  CellularVerdict v = is_cellular_square(f.square("reg_pullback"), f.cs);
  EXPECT_EQ(cokernel(v.mediating).group.canon(), AbGroup::cyclic(2).canon());
}

TEST(Query, SequencesBuildAndVerify) {
  InstanceFile f = load_instance_file(instance("builtin.json"));
  Json built = query(f, {"indep-seq", "build", "zero_Z", "3"});
  EXPECT_EQ(built.at("canons").size(), 4u);
  EXPECT_EQ(built.at("verification").at("verdict"), "all-passed");
  EXPECT_EQ(built.at("canons")[2], (Canon{3, {}}).str());

  InstanceFile reloaded = load_instance(built.at("instance"));
  EXPECT_TRUE(reloaded.diagnostics.empty());
  EXPECT_EQ(query(reloaded, {"indep-seq", "verify", "seq"}).at("verdict"), "all-passed");

  Json reg = query(f, {"indep-seq", "verify", "regression_sequence"});
  EXPECT_EQ(reg.at("verdict"), "counterexamples-found");
  EXPECT_EQ(reg.at("failures")[0].at("detail").get<std::string>().rfind("(0,1)", 0), 0u);
}

TEST(Query, ProbeOnIndiscreteInstance) {
  InstanceFile f = load_instance_file(instance("indiscrete.json"));
  Json p = query(f, {"probe", "free_pushout", "collapsed", "2"});
  EXPECT_EQ(p.at("verdict"), "inconclusive");
  EXPECT_EQ(p.at("details").at("merged"), false);
  EXPECT_TRUE(p.at("details").contains("obstruction"));
}

TEST(Witness, SampledFailuresReloadAsInstances) {
  SuiteConfig cfg;
  cfg.cs = CellularStructure{TorsionFree{}};
  cfg.samples = 300;
  CheckReport r = check_effective_unions(cfg);
  ASSERT_GT(r.sampled_failures(), 0u);
  for (const auto& fl : r.failures) {
    if (!fl.sample || fl.kind != "pullback-not-cellular") continue;
    InstanceFile f = load_instance(fl.witness);
    ASSERT_TRUE(f.diagnostics.empty());
    EXPECT_EQ(query(f, {"cellular-square", "w_pullback"}).at("is_cellular"), false);
    PullbackResult pb = pullback(f.cospan("w").u, f.cospan("w").v);
    EXPECT_EQ(pb.q.canon(), f.square("w_pullback").a().canon());
  }
}

TEST(Suites, RegistryFollowsExcludedPrimes) {
  const CellularStructure tf{TorsionFree{}};
  const CellularStructure all{AllGroups{}};
  EXPECT_EQ(default_expected_failures(tf, NotionKind::Cellular),
            (std::set<std::string>{"effective-unions", "left-cancel"}));
  EXPECT_EQ(default_expected_failures(tf, NotionKind::Pullback),
            (std::set<std::string>{"compare", "effective-unions", "left-cancel"}));
  EXPECT_TRUE(default_expected_failures(all, NotionKind::Cellular).empty());
  EXPECT_TRUE(default_expected_failures(all, NotionKind::Pullback).empty());
  EXPECT_EQ(default_expected_failures(all, NotionKind::Indiscrete), std::set<std::string>{"compare"});
}

TEST(Suites, ExitCodeSummarizesStatuses) {
  auto run = [](const std::string& status) {
    SuiteRun r;
    r.status = status;
    return r;
  };
  EXPECT_EQ(suite_exit_code({run("as-registered")}), 0);
  EXPECT_EQ(suite_exit_code({run("as-registered"), run("inconclusive")}), 3);
  EXPECT_EQ(suite_exit_code({run("inconclusive"), run("unexpected-counterexample")}), 1);
  EXPECT_EQ(suite_exit_code({run("registered-witness-missing")}), 1);
}

TEST(Cli, ValidateExitCodes) {
  CliRun ok = run_cli("validate " + instance("builtin.json"));
  EXPECT_EQ(ok.exit_code, 0);
  EXPECT_EQ(lines(ok.out).at(0).at("valid"), true);

  CliRun bad = run_cli("validate " + instance("faults/ill_defined_hom.json"));
  EXPECT_EQ(bad.exit_code, 1);
  EXPECT_EQ(lines(bad.out).at(0).at("diagnostics")[0].at("entity"), "homs.bad");

  CliRun syntax = run_cli("validate " + instance("faults/syntax_error.json"));
  EXPECT_EQ(syntax.exit_code, 2);
  Json err = lines(syntax.out).at(0).at("error");
  EXPECT_EQ(err.at("kind"), "parse");
  EXPECT_EQ(err.at("line"), 5);
  EXPECT_EQ(err.at("column"), 3);
}

TEST(Cli, QueryAndErrors) {
  CliRun q = run_cli("query " + instance("builtin.json") + " ext1 Z4 Z6");
  EXPECT_EQ(q.exit_code, 0);
  EXPECT_EQ(lines(q.out).at(0).at("result").at("canon").at("torsion"), Json::array({"2"}));

  EXPECT_EQ(run_cli("query " + instance("builtin.json") + " nope").exit_code, 2);
  EXPECT_EQ(run_cli("query " + instance("faults/non_commuting_square.json") + " canon Z").exit_code, 2);
  EXPECT_EQ(run_cli("query " + instance("builtin.json") + " amalgamate span_23").exit_code, 2);
}

TEST(Cli, SuiteArgumentErrors) {
  const std::string file = instance("builtin.json");
  EXPECT_EQ(run_cli("suite " + file + " --samples 0").exit_code, 2);
  EXPECT_EQ(run_cli("suite " + file + " --suite nonsense").exit_code, 2);
  EXPECT_EQ(run_cli("suite " + file + " --caps 4,4").exit_code, 2);
  EXPECT_EQ(run_cli("suite " + file + " --compare-with other").exit_code, 2);
  EXPECT_EQ(run_cli("suite " + file + " --bogus").exit_code, 2);
}

TEST(Cli, SuiteStatusesAndExitCodes) {
  const std::string file = instance("builtin.json");
  CliRun lc = run_cli("suite " + file + " --suite left-cancel --samples 50");
  EXPECT_EQ(lc.exit_code, 0);
  Json line = lines(lc.out).at(0);
  EXPECT_EQ(line.at("status"), "as-registered");
  EXPECT_EQ(line.at("verdict"), "counterexamples-found");
  EXPECT_EQ(line.at("expected_failure"), true);

  CliRun coh = run_cli("suite " + file + " --suite coherence --samples 50 --expect-fail coherence");
  EXPECT_EQ(coh.exit_code, 1);
  EXPECT_EQ(lines(coh.out).at(0).at("status"), "registered-witness-missing");

  CliRun all = run_cli("suite " + instance("all_groups.json") + " --suite left-cancel --samples 50");
  EXPECT_EQ(all.exit_code, 0);
  EXPECT_EQ(lines(all.out).at(0).at("verdict"), "all-passed");

  CliRun cmp = run_cli("suite " + file + " --suite compare --samples 40 --compare-with indiscrete");
  EXPECT_EQ(cmp.exit_code, 0);
  EXPECT_EQ(lines(cmp.out).at(0).at("compare_with"), "indiscrete");
}

TEST(Cli, SuiteOutputIsDeterministic) {
  const std::string args = "suite " + instance("perp_z2.json") +
                           " --suite invariance --suite effective-unions --samples 60 --seed 3";
  CliRun a = run_cli(args, "CELLWORK_THREADS=1");
  CliRun b = run_cli(args, "CELLWORK_THREADS=3");
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(lines(a.out).size(), 2u);
  CliRun c = run_cli("suite " + instance("perp_z2.json") + " --suite invariance --samples 60 --seed 4");
  EXPECT_NE(lines(a.out).at(1).at("counters"), Json());
  EXPECT_NE(lines(c.out).at(0).dump(), lines(a.out).at(1).dump());
}

TEST(Cli, WitnessFileRoundTrip) {
  const std::string file = instance("builtin.json");
  CliRun run = run_cli("suite " + file + " --suite effective-unions --samples 200 --seed 5");
  ASSERT_EQ(run.exit_code, 0);
  Json line = lines(run.out).at(0);
  Json witness;
  for (const auto& f : line.at("failures"))
    if (f.contains("sample") && f.at("kind") == "pullback-not-cellular") {
      witness = f.at("witness");
      break;
    }
  ASSERT_FALSE(witness.is_null());
  const auto path = std::filesystem::temp_directory_path() / "cellwork_witness_test.json";
  std::ofstream(path) << witness.dump(2);
  EXPECT_EQ(run_cli("validate " + path.string()).exit_code, 0);
  CliRun q = run_cli("query " + path.string() + " cellular-square w_pullback");
  EXPECT_EQ(q.exit_code, 0);
  EXPECT_EQ(lines(q.out).at(0).at("result").at("is_cellular"), false);

  CliRun lc = run_cli("suite " + file + " --suite left-cancel --samples 200 --seed 5");
  const Json lc_line = lines(lc.out).at(0);
  Json lc_witness;
  for (const auto& f : lc_line.at("failures"))
    if (f.contains("builtin") && f.at("builtin") == "left_cancel_coprojection") lc_witness = f.at("witness");
  ASSERT_FALSE(lc_witness.is_null());
  std::ofstream(path) << lc_witness.dump(2);
  CliRun f_in = run_cli("query " + path.string() + " in-m f");
  CliRun gf_in = run_cli("query " + path.string() + " in-m gf");
  EXPECT_EQ(lines(f_in.out).at(0).at("result").at("in_M"), false);
  EXPECT_EQ(lines(gf_in.out).at(0).at("result").at("in_M"), true);
  std::filesystem::remove(path);
}
