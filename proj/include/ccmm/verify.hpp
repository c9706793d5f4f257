#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ccmm/finsler.hpp"
#include "ccmm/io.hpp"
#include "ccmm/spectrum.hpp"

namespace ccmm {

enum class Status { Pass, Fail, Inconclusive, Skipped };
std::string to_string(Status s);

struct CheckResult {
  Status status = Status::Skipped;
  double margin = 0.0;
  std::string notes;
  Json witness;  ///< null unless failed
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::string space_hash;
  std::size_t n = 0;
  std::vector<std::string> sections;
  std::vector<std::pair<std::string, CheckResult>> results;  ///< fixed id order

  bool any_fail() const;
  const CheckResult& at(const std::string& id) const;
  Json to_json() const;
  /// id,status,margin,notes
  std::string to_csv() const;
};

/// Suite ids in report order.
const std::vector<std::string>& verify_ids();
/// Section of an id: sec3, sec4, sec5 or sec6.
std::string section_of(const std::string& id);

struct VerifyOptions {
  std::set<std::string> sections{"sec3", "sec4", "sec5", "sec6"};
  std::uint64_t seed = 0;
  std::size_t family_count = 0;  ///< 0: 2n + 32
  std::size_t restarts = 8;
  double scale = 0.0;            ///< 0: 1.000001 x mesh step
  std::optional<Certificate> certified;
  std::optional<ChengInputs> cheng;
};

VerifyReport run_verify(const MetricMeasureSpace& mm, const VerifyOptions& options);

}  // namespace ccmm
