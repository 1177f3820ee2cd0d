#pragma once

#include "cellwork/cellular.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace cellwork {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFormatVersion = "cellwork/1";

inline Json to_json(const Integer& x) { return x.str(); }

/// Row-major array of arrays of decimal strings.
inline Json to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json to_json(const IntVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(x.str());
  return out;
}

inline Json to_json(const Canon& c) {
  Json torsion = Json::array();
  for (const auto& t : c.torsion) torsion.push_back(t.str());
  return Json{{"free_rank", c.free_rank}, {"torsion", std::move(torsion)}, {"text", c.str()}};
}

inline Json to_json(const AbGroup& g) { return Json{{"gens", g.n_gens()}, {"rels", to_json(g.rels())}}; }

inline Json to_json(const ClassSpec& spec) {
  if (std::holds_alternative<TorsionFree>(spec)) return Json{{"class", "torsion-free"}};
  if (std::holds_alternative<AllGroups>(spec)) return Json{{"class", "all"}};
  Json targets = Json::array();
  for (const auto& t : std::get<PerpOf>(spec).targets) targets.push_back(to_json(t));
  return Json{{"class", "perp"}, {"targets", std::move(targets)}};
}

/// Anonymous hom description (groups inlined), used inside query results.
inline Json hom_summary(const Hom& h) {
  return Json{{"src", to_json(h.src())}, {"dst", to_json(h.dst())}, {"mat", to_json(h.mat())}};
}

/// Builds a self-contained instance document, so any witness can be saved
/// and passed back to `cellwork validate` / `cellwork query` unchanged.
class Witness {
 public:
  Witness() = default;

  Witness& structure(const CellularStructure& cs) {
    structure_ = to_json(cs.class_spec);
    return *this;
  }
  Witness& notion(std::string name) {
    notion_ = std::move(name);
    return *this;
  }

  /// Registers g under name (idempotent for identical presentations).
  Witness& group(const std::string& name, const AbGroup& g) {
    groups_[name] = to_json(g);
    return *this;
  }

  Witness& hom(const std::string& name, const Hom& h, const std::string& src, const std::string& dst) {
    group(src, h.src());
    group(dst, h.dst());
    homs_[name] = Json{{"src", src}, {"dst", dst}, {"mat", to_json(h.mat())}};
    return *this;
  }

  /// Adds groups <p>A..<p>D, homs <p>f, <p>g, <p>u, <p>v and the square itself.
  Witness& square(const std::string& name, const Square& sq, const std::string& p = "") {
    hom(p + "f", sq.f, p + "A", p + "B");
    hom(p + "g", sq.g, p + "A", p + "C");
    hom(p + "u", sq.u, p + "C", p + "D");
    hom(p + "v", sq.v, p + "B", p + "D");
    squares_[name] = Json{{"f", p + "f"}, {"g", p + "g"}, {"u", p + "u"}, {"v", p + "v"}};
    return *this;
  }

  Witness& span(const std::string& name, const Span& s, const std::string& p = "") {
    hom(p + "f", s.f, p + "A", p + "B");
    hom(p + "g", s.g, p + "A", p + "C");
    spans_[name] = Json{{"f", p + "f"}, {"g", p + "g"}};
    return *this;
  }

  Witness& cospan(const std::string& name, const Hom& u, const Hom& v, const std::string& p = "") {
    hom(p + "u", u, p + "B", p + "D");
    hom(p + "v", v, p + "C", p + "D");
    cospans_[name] = Json{{"u", p + "u"}, {"v", p + "v"}};
    return *this;
  }

  Witness& raw(const std::string& section, const std::string& name, Json value) {
    extra_[section][name] = std::move(value);
    return *this;
  }

  Json json() const {
    Json out{{"format", kFormatVersion}};
    if (!structure_.is_null()) out["structure"] = structure_;
    if (!notion_.empty()) out["notion"] = notion_;
    out["groups"] = groups_.empty() ? Json::object() : groups_;
    out["homs"] = homs_.empty() ? Json::object() : homs_;
    if (!spans_.empty()) out["spans"] = spans_;
    if (!cospans_.empty()) out["cospans"] = cospans_;
    if (!squares_.empty()) out["squares"] = squares_;
    for (const auto& [k, v] : extra_.items()) out[k] = v;
    return out;
  }

 private:
  Json structure_;
  std::string notion_;
  Json groups_ = Json::object();
  Json homs_ = Json::object();
  Json spans_ = Json::object();
  Json cospans_ = Json::object();
  Json squares_ = Json::object();
  Json extra_ = Json::object();
};

}  // namespace cellwork
