#pragma once

#include "cellwork/serialize.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cellwork {

enum class Verdict { AllPassed, CounterexamplesFound, Inconclusive };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::AllPassed: return "all-passed";
    case Verdict::CounterexamplesFound: return "counterexamples-found";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct Failure {
  std::optional<std::uint64_t> sample;  // absent for builtin witnesses
  std::string builtin;                  // builtin witness name, if any
  std::string kind;
  std::string detail;
  Json witness;
};

/// A named fixed input run by a suite alongside its random samples.
struct BuiltinResult {
  std::string name;
  bool counterexample = false;
  std::string detail;
};

using Counters = std::map<std::string, std::int64_t>;

/// Outcome of a single sample, produced independently and merged by index.
struct SampleResult {
  bool starved = false;
  std::vector<Failure> failures;
  Counters counters;

  void count(const std::string& key, std::int64_t by = 1) { counters[key] += by; }
  void fail(std::string kind, std::string detail, Json witness) {
    failures.push_back(Failure{std::nullopt, "", std::move(kind), std::move(detail), std::move(witness)});
  }
};

struct CheckReport {
  std::string suite;
  std::uint64_t samples = 0;  // requested
  std::uint64_t samples_run = 0;
  std::uint64_t starved = 0;
  std::vector<Failure> failures;
  std::vector<BuiltinResult> builtins;
  Counters counters;
  /// Set when the suite itself decides the outcome is undetermined (e.g. an exhausted search).
  bool undetermined = false;
  /// Suite-specific structured output (omitted when null).
  Json details;

  /// Inconclusive when more than a tenth of the samples starved and nothing failed.
  Verdict verdict() const {
    if (!failures.empty()) return Verdict::CounterexamplesFound;
    if (undetermined || starved * 10 > samples) return Verdict::Inconclusive;
    return Verdict::AllPassed;
  }

  void absorb(std::uint64_t index, SampleResult&& r) {
    if (r.starved) {
      ++starved;
    } else {
      ++samples_run;
    }
    for (auto& f : r.failures) {
      f.sample = index;
      failures.push_back(std::move(f));
    }
    for (const auto& [k, v] : r.counters) counters[k] += v;
  }

  void add_builtin(const std::string& name, bool counterexample, std::string detail, Json witness,
                   const std::string& kind) {
    builtins.push_back(BuiltinResult{name, counterexample, detail});
    if (counterexample) failures.push_back(Failure{std::nullopt, name, kind, std::move(detail), std::move(witness)});
  }

  std::size_t sampled_failures() const {
    std::size_t n = 0;
    for (const auto& f : failures) n += f.sample.has_value();
    return n;
  }

  bool builtin_found(const std::string& name) const {
    for (const auto& b : builtins)
      if (b.name == name) return b.counterexample;
    return false;
  }
};

inline Json to_json(const CheckReport& r) {
  Json failures = Json::array();
  for (const auto& f : r.failures) {
    Json j;
    if (f.sample) j["sample"] = *f.sample;
    if (!f.builtin.empty()) j["builtin"] = f.builtin;
    j["kind"] = f.kind;
    if (!f.detail.empty()) j["detail"] = f.detail;
    j["witness"] = f.witness;
    failures.push_back(std::move(j));
  }
  Json builtins = Json::array();
  for (const auto& b : r.builtins)
    builtins.push_back(Json{{"name", b.name}, {"counterexample", b.counterexample}, {"detail", b.detail}});
  Json counters = Json::object();
  for (const auto& [k, v] : r.counters) counters[k] = v;
  Json out{{"suite", r.suite},
           {"verdict", verdict_name(r.verdict())},
           {"samples", r.samples},
           {"samples_run", r.samples_run},
           {"starved", r.starved},
           {"counters", std::move(counters)},
           {"builtins", std::move(builtins)},
           {"failures", std::move(failures)}};
  if (!r.details.is_null()) out["details"] = r.details;
  return out;
}

}  // namespace cellwork
