#pragma once

#include "cellwork/independence.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace cellwork {

/// JSON syntax error with a 1-based position.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : InputError(what), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_, column_;
};

/// An invariant violated by a syntactically valid file.
struct Diagnostic {
  std::string entity;     // e.g. "homs.bad"
  std::string invariant;  // e.g. "well-defined"
  std::string message;
};

inline Json to_json(const Diagnostic& d) {
  return Json{{"entity", d.entity}, {"invariant", d.invariant}, {"message", d.message}};
}

struct InstanceFile {
  std::map<std::string, AbGroup> groups;
  std::map<std::string, Hom> homs;
  std::map<std::string, Span> spans;
  std::map<std::string, Cospan> cospans;
  std::map<std::string, Square> squares;
  std::map<std::string, IndependentSequence> sequences;
  CellularStructure cs{TorsionFree{}};
  NotionKind notion = NotionKind::Cellular;
  std::vector<std::string> expected_failures;
  std::vector<Diagnostic> diagnostics;

  IndependenceNotion independence() const { return IndependenceNotion{notion, cs}; }

  template <class Map>
  static const typename Map::mapped_type& lookup(const Map& m, const std::string& name, const char* kind) {
    auto it = m.find(name);
    if (it == m.end()) throw InputError(std::string("unknown ") + kind + " '" + name + "'");
    return it->second;
  }
  const AbGroup& group(const std::string& n) const { return lookup(groups, n, "group"); }
  const Hom& hom(const std::string& n) const { return lookup(homs, n, "hom"); }
  const Span& span(const std::string& n) const { return lookup(spans, n, "span"); }
  const Cospan& cospan(const std::string& n) const { return lookup(cospans, n, "cospan"); }
  const Square& square(const std::string& n) const { return lookup(squares, n, "square"); }
  const IndependentSequence& sequence(const std::string& n) const { return lookup(sequences, n, "sequence"); }
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline Integer parse_integer(const Json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return Integer::parse(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  if (j.is_number_unsigned()) return Integer(j.get<std::uint64_t>());
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  throw InputError(where + ": expected an integer (decimal string or number)");
}

inline std::size_t parse_count(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    throw InputError(where + ": expected a nonnegative integer");
  return j.get<std::size_t>();
}

/// rows x cols matrix from an array of rows; [] stands for any matrix with no entries.
inline IntMatrix parse_matrix(const Json& j, std::size_t rows, std::size_t cols, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of rows");
  if (j.empty() && (rows == 0 || cols == 0)) return IntMatrix(rows, cols);
  if (j.size() != rows)
    throw InputError(where + ": expected " + std::to_string(rows) + " rows, found " + std::to_string(j.size()));
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const Json& row = j[i];
    const std::string rw = where + "[" + std::to_string(i) + "]";
    if (!row.is_array()) throw InputError(rw + ": expected an array");
    if (row.size() != cols)
      throw InputError(rw + ": expected " + std::to_string(cols) + " entries, found " + std::to_string(row.size()));
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = parse_integer(row[c], rw + "[" + std::to_string(c) + "]");
  }
  return m;
}

inline AbGroup parse_group(const Json& j, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object with gens and rels");
  if (!j.contains("gens")) throw InputError(where + ": missing 'gens'");
  const std::size_t n = parse_count(j["gens"], where + ".gens");
  const Json rels = j.value("rels", Json::array());
  if (!rels.is_array()) throw InputError(where + ".rels: expected an array of rows");
  std::size_t k = 0;
  if (!rels.empty()) {
    if (!rels[0].is_array()) throw InputError(where + ".rels[0]: expected an array");
    k = rels[0].size();
  }
  return AbGroup(n, parse_matrix(rels, n, k, where + ".rels"));
}

inline const std::string& ref(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_string())
    throw InputError(where + ": missing string field '" + key + "'");
  return j[key].get_ref<const std::string&>();
}

inline ClassSpec parse_class(const Json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("class") || !j["class"].is_string())
    throw InputError(where + ": expected {\"class\": ...}");
  const std::string c = j["class"].get<std::string>();
  if (c == "torsion-free") return TorsionFree{};
  if (c == "all") return AllGroups{};
  if (c == "perp") {
    if (!j.contains("targets") || !j["targets"].is_array()) throw InputError(where + ": perp requires 'targets'");
    PerpOf p;
    for (std::size_t i = 0; i < j["targets"].size(); ++i)
      p.targets.push_back(parse_group(j["targets"][i], where + ".targets[" + std::to_string(i) + "]"));
    return p;
  }
  throw InputError(where + ".class: unknown class '" + c + "' (torsion-free, perp, all)");
}

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string msg = e.what();
    if (auto p = msg.find("parse error"); p != std::string::npos) msg = msg.substr(p);
    throw ParseError(msg, line, col);
  }
}

}  // namespace detail

/// Parses and validates an instance document. Structural problems (bad JSON
/// shape, unresolved names, wrong dimensions) throw InputError; violated
/// algebraic invariants are collected in `diagnostics`.
inline InstanceFile load_instance(const Json& doc) {
  using namespace detail;
  InstanceFile f;
  if (!doc.is_object()) throw InputError("document: expected a JSON object");
  if (doc.contains("format") && doc["format"] != kFormatVersion)
    throw InputError("format: expected \"" + std::string(kFormatVersion) + "\"");
  auto section = [&](const char* key) {
    if (!doc.contains(key)) return Json::object();
    if (!doc[key].is_object()) throw InputError(std::string(key) + ": expected an object");
    return doc[key];
  };
  const Json groups_json = section("groups"), homs_json = section("homs"), spans_json = section("spans"),
             cospans_json = section("cospans"), squares_json = section("squares"),
             sequences_json = section("sequences");

  for (const auto& [name, g] : groups_json.items()) f.groups.emplace(name, parse_group(g, "groups." + name));

  for (const auto& [name, h] : homs_json.items()) {
    const std::string where = "homs." + name;
    const AbGroup& src = f.group(ref(h, "src", where));
    const AbGroup& dst = f.group(ref(h, "dst", where));
    if (!h.contains("mat")) throw InputError(where + ": missing 'mat'");
    Hom hom(src, dst, parse_matrix(h["mat"], dst.n_gens(), src.n_gens(), where + ".mat"));
    if (!hom_well_defined(hom))
      f.diagnostics.push_back({where, "well-defined",
                               "hom '" + name + "' is not well-defined: a relation of '" + ref(h, "src", where) +
                                   "' maps outside the relation span of '" + ref(h, "dst", where) + "'"});
    f.homs.emplace(name, std::move(hom));
  }

  for (const auto& [name, s] : spans_json.items()) {
    const std::string where = "spans." + name;
    Span sp{f.hom(ref(s, "f", where)), f.hom(ref(s, "g", where))};
    if (!(sp.f.src() == sp.g.src())) {
      f.diagnostics.push_back({where, "span", "span '" + name + "': f and g have different domains"});
      continue;
    }
    f.spans.emplace(name, std::move(sp));
  }

  for (const auto& [name, s] : cospans_json.items()) {
    const std::string where = "cospans." + name;
    Cospan co{f.hom(ref(s, "u", where)), f.hom(ref(s, "v", where))};
    if (!(co.u.dst() == co.v.dst())) {
      f.diagnostics.push_back({where, "cospan", "cospan '" + name + "': u and v have different codomains"});
      continue;
    }
    f.cospans.emplace(name, std::move(co));
  }

  for (const auto& [name, s] : squares_json.items()) {
    const std::string where = "squares." + name;
    Square sq{f.hom(ref(s, "f", where)), f.hom(ref(s, "g", where)), f.hom(ref(s, "u", where)),
              f.hom(ref(s, "v", where))};
    try {
      if (!square_commutes(sq)) {
        f.diagnostics.push_back({where, "commutes", "square '" + name + "' does not commute (u.g != v.f)"});
        continue;
      }
    } catch (const InputError& e) {
      f.diagnostics.push_back({where, "shape", "square '" + name + "': " + e.what()});
      continue;
    }
    f.squares.emplace(name, std::move(sq));
  }

  for (const auto& [name, s] : sequences_json.items()) {
    const std::string where = "sequences." + name;
    if (!s.is_object()) throw InputError(where + ": expected an object");
    IndependentSequence seq;
    seq.length = parse_count(s.value("length", Json()), where + ".length");
    seq.base = f.hom(ref(s, "base", where));
    const Json objects = s.value("objects", Json::array());
    const Json arrows = s.value("arrows", Json::array());
    const Json transitions = s.value("transitions", Json::array());
    if (!objects.is_array() || !arrows.is_array() || !transitions.is_array())
      throw InputError(where + ": objects, arrows and transitions must be arrays");
    for (std::size_t i = 0; i < objects.size(); ++i) {
      if (!objects[i].is_string()) throw InputError(where + ".objects[" + std::to_string(i) + "]: expected a name");
      seq.objects.push_back(f.group(objects[i].get<std::string>()));
    }
    seq.arrows.push_back(identity(seq.base.dst()));
    for (std::size_t i = 0; i < arrows.size(); ++i) {
      if (!arrows[i].is_string()) throw InputError(where + ".arrows[" + std::to_string(i) + "]: expected a name");
      seq.arrows.push_back(f.hom(arrows[i].get<std::string>()));
    }
    for (std::size_t t = 0; t < transitions.size(); ++t) {
      const Json& e = transitions[t];
      const std::string tw = where + ".transitions[" + std::to_string(t) + "]";
      if (!e.is_array() || e.size() != 3 || !e[2].is_string())
        throw InputError(tw + ": expected [i, j, hom]");
      seq.transitions.insert_or_assign({parse_count(e[0], tw + "[0]"), parse_count(e[1], tw + "[1]")},
                                       f.hom(e[2].get<std::string>()));
    }
    f.sequences.emplace(name, std::move(seq));
  }

  if (doc.contains("structure")) f.cs.class_spec = parse_class(doc["structure"], "structure");
  if (doc.contains("notion")) {
    if (!doc["notion"].is_string()) throw InputError("notion: expected a string");
    auto k = parse_notion(doc["notion"].get<std::string>());
    if (!k) throw InputError("notion: unknown notion '" + doc["notion"].get<std::string>() + "'");
    f.notion = *k;
  }
  if (doc.contains("expected_failures")) {
    const Json& e = doc["expected_failures"];
    if (!e.is_array()) throw InputError("expected_failures: expected an array of suite names");
    for (const auto& s : e) {
      if (!s.is_string()) throw InputError("expected_failures: expected suite names");
      f.expected_failures.push_back(s.get<std::string>());
    }
  }
  return f;
}

inline InstanceFile load_instance_text(const std::string& text) { return load_instance(detail::parse_json_text(text)); }

inline InstanceFile load_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_instance_text(ss.str());
}

// ---------------------------------------------------------------------------
// Queries

namespace detail {

inline Json snf_json(const IntMatrix& m) {
  SnfResult r = smith_normal_form(m);
  return Json{{"diagonal", to_json(r.diagonal())},
              {"rank", r.rank()},
              {"u", to_json(r.u)},
              {"s", to_json(r.s)},
              {"v", to_json(r.v)}};
}

inline Json pushout_json(const PushoutResult& po) {
  return Json{{"P", to_json(po.p)},
              {"canon", to_json(po.p.canon())},
              {"into_b", to_json(po.into_b.mat())},
              {"into_c", to_json(po.into_c.mat())}};
}

inline Json verdict_json(const CellularVerdict& v) {
  return Json{{"is_cellular", v.is_cellular},
              {"mediating", to_json(v.mediating.mat())},
              {"mediating_is_mono", is_mono(v.mediating)},
              {"mediating_cokernel", to_json(cokernel(v.mediating).group.canon())},
              {"pushout", pushout_json(v.pushout)}};
}

inline void require_args(const std::vector<std::string>& args, std::size_t n, const std::string& usage) {
  if (args.size() != n + 1) throw InputError("usage: " + usage);
}

inline std::size_t parse_size(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size() || s.empty() || s[0] == '-') throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw InputError(what + ": expected a nonnegative integer, got '" + s + "'");
  }
}

}  // namespace detail

inline const std::vector<std::string>& query_names() {
  static const std::vector<std::string> names{
      "snf",         "canon",     "ext1",          "coker",           "pushout", "pullback",
      "in-m",        "cellular-square", "cellular-object", "amalgamate", "unify", "indep-seq",
      "is-independent", "probe"};
  return names;
}

/// Runs one query; args[0] is the query name. Returns {"query": ..., "result": ...}.
inline Json run_query(const InstanceFile& file, const std::vector<std::string>& args) {
  using namespace detail;
  if (args.empty()) throw InputError("missing query; one of: snf, canon, ext1, coker, pushout, pullback, in-m, "
                                     "cellular-square, cellular-object, amalgamate, unify, indep-seq, "
                                     "is-independent, probe");
  const std::string& q = args[0];
  const CellularStructure& cs = file.cs;
  Json result;
  if (q == "snf") {
    require_args(args, 1, "snf <hom|group>");
    if (file.homs.count(args[1])) {
      result = snf_json(file.hom(args[1]).mat());
    } else {
      result = snf_json(file.group(args[1]).rels());
    }
  } else if (q == "canon") {
    require_args(args, 1, "canon <group>");
    result = to_json(file.group(args[1]).canon());
  } else if (q == "ext1") {
    require_args(args, 2, "ext1 <group> <group>");
    AbGroup e = ext1(file.group(args[1]), file.group(args[2]));
    result = Json{{"group", to_json(e)}, {"canon", to_json(e.canon())}};
  } else if (q == "coker") {
    require_args(args, 1, "coker <hom>");
    CokernelResult c = cokernel(file.hom(args[1]));
    result = Json{{"group", to_json(c.group)}, {"canon", to_json(c.group.canon())},
                  {"projection", to_json(c.projection.mat())}};
  } else if (q == "pushout") {
    require_args(args, 1, "pushout <span>");
    result = pushout_json(pushout(file.span(args[1])));
  } else if (q == "pullback") {
    require_args(args, 1, "pullback <cospan>");
    const Cospan& co = file.cospan(args[1]);
    PullbackResult pb = pullback(co.u, co.v);
    result = Json{{"Q", to_json(pb.q)}, {"canon", to_json(pb.q.canon())}, {"q_b", to_json(pb.q_b.mat())},
                  {"q_c", to_json(pb.q_c.mat())}};
  } else if (q == "in-m") {
    require_args(args, 1, "in-m <hom>");
    const Hom& h = file.hom(args[1]);
    result = Json{{"in_M", in_M(h, cs)}, {"is_mono", is_mono(h)},
                  {"cokernel", to_json(cokernel(h).group.canon())}, {"structure", to_json(cs.class_spec)}};
  } else if (q == "cellular-square") {
    require_args(args, 1, "cellular-square <square>");
    result = verdict_json(is_cellular_square(file.square(args[1]), cs));
  } else if (q == "cellular-object") {
    require_args(args, 1, "cellular-object <group>");
    result = Json{{"is_cellular", is_cellular_object(file.group(args[1]), cs)}};
  } else if (q == "amalgamate") {
    require_args(args, 1, "amalgamate <span>");
    Square sq = amalgamate(file.span(args[1]), cs);
    result = Json{{"D", to_json(sq.d())}, {"canon", to_json(sq.d().canon())}, {"u", to_json(sq.u.mat())},
                  {"v", to_json(sq.v.mat())}, {"is_cellular", is_cellular_square(sq, cs).is_cellular}};
  } else if (q == "unify") {
    require_args(args, 2, "unify <square> <square>");
    const Square& a = file.square(args[1]);
    const Square& b = file.square(args[2]);
    Amalgam m = unify_amalgams(a, b, cs);
    auto violation = merge_violation(IndependenceNotion{NotionKind::Cellular, cs}, a, b, m);
    result = Json{{"E", to_json(m.e)}, {"canon", to_json(m.e.canon())}, {"d1", to_json(m.d1.mat())},
                  {"d2", to_json(m.d2.mat())}, {"contract_holds", !violation.has_value()}};
    if (violation) result["violation"] = *violation;
  } else if (q == "is-independent") {
    require_args(args, 1, "is-independent <square>");
    result = Json{{"notion", notion_name(file.notion)},
                  {"independent", is_independent(file.independence(), file.square(args[1]))}};
  } else if (q == "probe") {
    if (args.size() != 3 && args.size() != 4) throw InputError("usage: probe <square> <square> [bound]");
    const int bound = args.size() == 4 ? static_cast<int>(parse_size(args[3], "bound")) : 2;
    result = to_json(probe_report(file.independence(), file.square(args[1]), file.square(args[2]), bound));
  } else if (q == "indep-seq") {
    if (args.size() >= 2 && args[1] == "build") {
      require_args(args, 3, "indep-seq build <hom> <length>");
      IndependentSequence s =
          build_independent_sequence(file.hom(args[2]), parse_size(args[3], "length"), file.independence());
      Json canons = Json::array();
      for (const auto& o : s.objects) canons.push_back(o.canon().str());
      Witness w;
      w.structure(cs).notion(notion_name(file.notion));
      result = Json{{"canons", canons}, {"instance", add_sequence(w, "seq", s).json()},
                    {"verification", to_json(verify_independent_sequence(s, file.independence()))}};
    } else if (args.size() >= 2 && args[1] == "verify") {
      require_args(args, 2, "indep-seq verify <sequence>");
      result = to_json(verify_independent_sequence(file.sequence(args[2]), file.independence()));
    } else {
      throw InputError("usage: indep-seq build <hom> <length> | indep-seq verify <sequence>");
    }
  } else {
    throw InputError("unknown query '" + q + "'");
  }
  return Json{{"query", q}, {"result", std::move(result)}};
}

// ---------------------------------------------------------------------------
// Suites

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"cellular-implies-pullback", "coherence", "compare",
                                              "effective-unions",          "existence", "invariance",
                                              "left-cancel",               "sequences", "symmetry",
                                              "transitivity",              "uniqueness"};
  return names;
}

/// Suites expected to report counterexamples for a structure and comparison notion.
inline std::set<std::string> default_expected_failures(const CellularStructure& cs, NotionKind compare_with) {
  std::set<std::string> out;
  const bool excludes_prime = smallest_excluded_prime(cs.class_spec).has_value();
  if (excludes_prime) out.insert({"effective-unions", "left-cancel"});
  if (compare_with == NotionKind::Indiscrete || (compare_with == NotionKind::Pullback && excludes_prime))
    out.insert("compare");
  return out;
}

struct SuiteRun {
  std::string status;  // as-registered | unexpected-counterexample | registered-witness-missing | inconclusive
  bool expected_failure = false;
  CheckReport report;
};

inline SuiteRun run_suite(const std::string& name, const IndependenceNotion& n, NotionKind compare_with,
                          const SuiteConfig& cfg, const std::set<std::string>& expected) {
  SuiteConfig c = cfg;
  c.cs = n.cs;
  CheckReport r;
  if (name == "coherence") r = check_coherence(c);
  else if (name == "left-cancel") r = check_left_cancellable(c);
  else if (name == "effective-unions") r = check_effective_unions(c);
  else if (name == "cellular-implies-pullback") r = check_cellular_implies_pullback(c);
  else if (name == "invariance") r = verify_invariance(n, c);
  else if (name == "symmetry") r = verify_symmetry(n, c);
  else if (name == "transitivity") r = verify_transitivity(n, c);
  else if (name == "existence") r = verify_existence(n, c);
  else if (name == "uniqueness") r = verify_uniqueness(n, c);
  else if (name == "sequences") r = verify_sequences(IndependenceNotion{NotionKind::Cellular, n.cs}, c);
  else if (name == "compare")
    r = compare_notions(IndependenceNotion{NotionKind::Cellular, n.cs}, IndependenceNotion{compare_with, n.cs}, c);
  else throw InputError("unknown suite '" + name + "'");

  SuiteRun run{"", expected.count(name) > 0, std::move(r)};
  switch (run.report.verdict()) {
    case Verdict::CounterexamplesFound:
      run.status = run.expected_failure ? "as-registered" : "unexpected-counterexample";
      break;
    case Verdict::AllPassed: run.status = run.expected_failure ? "registered-witness-missing" : "as-registered"; break;
    case Verdict::Inconclusive: run.status = "inconclusive"; break;
  }
  return run;
}

inline Json suite_line(const SuiteRun& run, const IndependenceNotion& n, NotionKind compare_with,
                       const SuiteConfig& cfg) {
  Json j = to_json(run.report);
  Json head{{"suite", run.report.suite},
            {"status", run.status},
            {"expected_failure", run.expected_failure},
            {"structure", to_json(n.cs.class_spec)},
            {"notion", notion_name(n.kind)},
            {"seed", std::to_string(cfg.seed)},
            {"caps", Json::array({cfg.caps.gens, cfg.caps.rels, cfg.caps.entry})},
            {"bound", cfg.bound}};
  if (run.report.suite == "compare") head["compare_with"] = notion_name(compare_with);
  for (auto& [k, v] : j.items())
    if (k != "suite") head[k] = v;
  return head;
}

/// 0 = everything as registered, 1 = unexpected outcome, 3 = inconclusive.
inline int suite_exit_code(const std::vector<SuiteRun>& runs) {
  bool inconclusive = false;
  for (const auto& r : runs) {
    if (r.status == "unexpected-counterexample" || r.status == "registered-witness-missing") return 1;
    if (r.status == "inconclusive") inconclusive = true;
  }
  return inconclusive ? 3 : 0;
}

}  // namespace cellwork
