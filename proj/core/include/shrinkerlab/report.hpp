#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "shrinkerlab/harness.hpp"

namespace shrinkerlab {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr int kCurveSchemaVersion = 1;
inline constexpr int kSnapshotSchemaVersion = 1;

nlohmann::ordered_json to_json(const InequalityReport& rep);
nlohmann::ordered_json to_json(const ConstantReport& rep);

std::string to_text(const InequalityReport& rep);

void write_reports_json(const std::string& path,
                        const std::vector<InequalityReport>& reports,
                        const nlohmann::ordered_json& manifest);
void write_sweep_csv(const std::string& path, const InequalityReport& rep);

// analytic-vs-numeric comparison rows for the variation tables
struct VariationRow {
  std::string quantity;
  double analytic_scale = 0;
  double max_abs_gap = 0;
  double rel_gap = 0;
  double richardson_error = 0;
};
void write_variation_csv(const std::string& path,
                         const std::vector<VariationRow>& rows);

}  // namespace shrinkerlab
