#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace enriched {

/// One law checked over some number of instances. `max_violation` is how far
/// the worst instance is from satisfying the law (0 when it holds exactly).
struct LawEntry {
  LawEntry() = default;
  explicit LawEntry(std::string name) : law(std::move(name)) {}

  std::string law;
  std::uint64_t checked = 0;
  double max_violation = 0.0;
  std::optional<std::vector<std::string>> witness;

  /// Records a checked instance; keeps the first witness of the worst violation.
  void record(double violation, const std::vector<std::string>& w) {
    ++checked;
    if (violation > max_violation) {
      max_violation = violation;
      witness = w;
    }
  }

  void absorb(const LawEntry& other) {
    checked += other.checked;
    if (other.max_violation > max_violation) {
      max_violation = other.max_violation;
      witness = other.witness;
    }
  }
};

struct VerificationReport {
  std::vector<LawEntry> entries;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  /// Reported statistics that are not pass/fail laws (e.g. equality gaps).
  std::vector<std::pair<std::string, double>> diagnostics;

  bool passed() const {
    return std::all_of(entries.begin(), entries.end(),
                       [&](const LawEntry& e) { return e.max_violation <= tolerance; });
  }

  bool entry_passed(const std::string& law) const {
    const LawEntry* e = find(law);
    return e && e->max_violation <= tolerance;
  }

  const LawEntry* find(const std::string& law) const {
    for (const auto& e : entries)
      if (e.law == law) return &e;
    return nullptr;
  }

  LawEntry& add(std::string law) {
    entries.push_back(LawEntry{std::move(law)});
    return entries.back();
  }

  void append(const VerificationReport& other) {
    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
    diagnostics.insert(diagnostics.end(), other.diagnostics.begin(), other.diagnostics.end());
  }

  // JSON has no infinity; non-finite values are written as strings.
  static nlohmann::ordered_json json_real(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["pass"] = passed();
    j["seed"] = seed;
    j["tolerance"] = tolerance;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
      nlohmann::ordered_json je;
      je["law"] = e.law;
      je["checked"] = e.checked;
      je["max_violation"] = json_real(e.max_violation);
      je["pass"] = e.max_violation <= tolerance;
      je["witness"] = e.witness ? nlohmann::ordered_json(*e.witness) : nlohmann::ordered_json();
      arr.push_back(std::move(je));
    }
    j["entries"] = std::move(arr);
    auto diag = nlohmann::ordered_json::object();
    for (const auto& [k, v] : diagnostics) diag[k] = json_real(v);
    j["diagnostics"] = std::move(diag);
    return j;
  }

  std::string dump() const {
    return to_json().dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::replace) + "\n";
  }
};

}  // namespace enriched
