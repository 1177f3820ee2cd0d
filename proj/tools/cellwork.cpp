#include "cellwork/cellwork.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <string>
#include <vector>

namespace {

using cellwork::Json;

constexpr int kExitInput = 2;

void print(const Json& j) { std::cout << j.dump() << '\n'; }

int report_error(const char* kind, const std::string& message, Json extra = Json::object()) {
  Json err{{"kind", kind}, {"message", message}};
  for (auto& [k, v] : extra.items()) err[k] = v;
  print(Json{{"error", err}});
  return kExitInput;
}

cellwork::Caps parse_caps(const std::string& text) {
  std::vector<std::int64_t> v;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string part = text.substr(start, end - start);
    try {
      std::size_t pos = 0;
      v.push_back(std::stoll(part, &pos));
      if (pos != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw cellwork::InputError("--caps: expected g,r,e with positive integers, got '" + text + "'");
    }
    start = end + 1;
  }
  if (v.size() != 3 || v[0] < 1 || v[1] < 0 || v[2] < 1)
    throw cellwork::InputError("--caps: expected g,r,e with g >= 1, r >= 0, e >= 1");
  return cellwork::Caps{static_cast<std::size_t>(v[0]), static_cast<std::size_t>(v[1]), v[2]};
}

int cmd_validate(const std::string& path) {
  cellwork::InstanceFile f = cellwork::load_instance_file(path);
  Json diags = Json::array();
  for (const auto& d : f.diagnostics) diags.push_back(to_json(d));
  const bool ok = f.diagnostics.empty();
  print(Json{{"valid", ok},
             {"counts",
              {{"groups", f.groups.size()},
               {"homs", f.homs.size()},
               {"spans", f.spans.size()},
               {"cospans", f.cospans.size()},
               {"squares", f.squares.size()},
               {"sequences", f.sequences.size()}}},
             {"diagnostics", diags}});
  return ok ? 0 : 1;
}

cellwork::InstanceFile load_valid(const std::string& path) {
  cellwork::InstanceFile f = cellwork::load_instance_file(path);
  if (!f.diagnostics.empty())
    throw cellwork::InputError(path + ": " + f.diagnostics.front().message + " (run validate for the full list)");
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cellwork: cellular squares and independence over finitely generated abelian groups"};
  app.require_subcommand(1);

  std::string file;
  auto* validate = app.add_subcommand("validate", "Check an instance file and list violated invariants");
  validate->add_option("file", file, "Instance file")->required();

  std::vector<std::string> query_args;
  auto* query = app.add_subcommand("query", "Evaluate one operation on named entities");
  query->add_option("file", file, "Instance file")->required();
  query->add_option("query", query_args, "Query name and arguments")->required()->expected(1, -1);

  std::uint64_t seed = 7;
  std::uint64_t samples = 200;
  std::vector<std::string> suites;
  std::vector<std::string> expect_fail;
  std::string caps_text = "4,4,6";
  int bound = 2;
  std::string compare_with;
  auto* suite = app.add_subcommand("suite", "Run seeded property suites; one JSON report per line");
  suite->add_option("file", file, "Instance file (structure, notion, expected failures)")->required();
  suite->add_option("--seed", seed, "Run seed");
  suite->add_option("--samples", samples, "Samples per suite");
  suite->add_option("--suite", suites, "Suite to run (repeatable; default all)");
  suite->add_option("--caps", caps_text, "Presentation caps gens,rels,entry");
  suite->add_option("--bound", bound, "Search bound for merge probes");
  suite->add_option("--expect-fail", expect_fail, "Register a suite as expected to find counterexamples");
  suite->add_option("--compare-with", compare_with, "Second notion for the compare suite (default: file notion)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report_error("usage", e.what());
  }

  try {
    if (*validate) return cmd_validate(file);

    if (*query) {
      cellwork::InstanceFile f = load_valid(file);
      print(cellwork::run_query(f, query_args));
      return 0;
    }

    cellwork::InstanceFile f = load_valid(file);
    cellwork::SuiteConfig cfg;
    cfg.cs = f.cs;
    cfg.seed = seed;
    cfg.samples = samples;
    cfg.caps = parse_caps(caps_text);
    cfg.bound = bound;
    cfg.threads = cellwork::default_threads();
    if (samples == 0) throw cellwork::InputError("--samples must be positive");
    if (bound < 0) throw cellwork::InputError("--bound must be nonnegative");
    cellwork::NotionKind other = f.notion;
    if (!compare_with.empty()) {
      auto k = cellwork::parse_notion(compare_with);
      if (!k) throw cellwork::InputError("--compare-with: unknown notion '" + compare_with + "'");
      other = *k;
    }
    if (suites.empty()) suites = cellwork::suite_names();
    for (const auto& s : suites)
      if (std::find(cellwork::suite_names().begin(), cellwork::suite_names().end(), s) ==
          cellwork::suite_names().end())
        throw cellwork::InputError("unknown suite '" + s + "'");
    std::sort(suites.begin(), suites.end());
    suites.erase(std::unique(suites.begin(), suites.end()), suites.end());

    std::set<std::string> expected = cellwork::default_expected_failures(f.cs, other);
    expected.insert(f.expected_failures.begin(), f.expected_failures.end());
    expected.insert(expect_fail.begin(), expect_fail.end());

    const cellwork::IndependenceNotion notion = f.independence();
    std::vector<cellwork::SuiteRun> runs;
    for (const auto& s : suites) {
      runs.push_back(cellwork::run_suite(s, notion, other, cfg, expected));
      print(cellwork::suite_line(runs.back(), notion, other, cfg));
    }
    return cellwork::suite_exit_code(runs);
  } catch (const cellwork::ParseError& e) {
    return report_error("parse", e.what(), Json{{"line", e.line()}, {"column", e.column()}});
  } catch (const cellwork::InputError& e) {
    return report_error("input", e.what());
  } catch (const cellwork::PreconditionError& e) {
    return report_error("precondition", e.what());
  } catch (const cellwork::SamplingError& e) {
    return report_error("sampling", e.what());
  }
}
