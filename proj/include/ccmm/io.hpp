#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "ccmm/concentration.hpp"
#include "ccmm/finsler.hpp"
#include "ccmm/lipschitz.hpp"
#include "ccmm/quasimetric.hpp"
#include "json.hpp"

namespace ccmm {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

/// File-system and format problems.
class IoError : public Error {
 public:
  using Error::Error;
};

struct LoadedSpace {
  MetricMeasureSpace mm;
  std::optional<Certificate> certified;
};

/// {"n", "dist" | "edges", "measure", "labels", "certified"}; exactly one of
/// dist / edges. A missing measure means uniform.
LoadedSpace parse_space(const Json& j);
LoadedSpace load_space(const std::string& path);
Json space_to_json(const MetricMeasureSpace& mm, const std::optional<Certificate>& certified = {});

/// FNV-1a over n, the distance matrix and the weights, as 16 hex digits.
std::string space_hash(const MetricMeasureSpace& mm);

/// Declarative catalog entry with constant tensors:
/// {"id", "domain", "x0", "x1", "length", "resolution", "metric": [a11, a12, a22],
///  "one_form": [b1, b2], "psi_quadratic": K, "certified": {...}}.
CatalogEntry parse_catalog_spec(const Json& j);

Json family_to_json(const LipschitzFamily& family);
LipschitzFamily family_from_json(const Json& j, const QuasiMetricSpace& space);

Json read_json_file(const std::string& path);
/// Throws IoError when the path cannot be written.
void write_text_file(const std::string& path, const std::string& content);

/// 17 significant digits; parses back to the same double.
std::string format_double(double v);

/// Header "r,alpha,strategy".
std::string profile_to_csv(const ConcentrationProfile& profile);
/// Points and strategy only.
ConcentrationProfile profile_from_csv(std::istream& in);

}  // namespace ccmm
