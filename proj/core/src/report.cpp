#include "shrinkerlab/report.hpp"

#include <fstream>
#include <sstream>

#include "shrinkerlab/errors.hpp"

namespace shrinkerlab {

using nlohmann::ordered_json;

ordered_json to_json(const InequalityReport& rep) {
  ordered_json j;
  j["name"] = rep.name;
  j["lhs"] = rep.lhs;
  j["rhs_terms"] = rep.rhs_terms;
  j["implied_constant"] = rep.implied_constant;
  j["tail_bound"] = rep.tail_bound;
  j["slopes"] = rep.slopes;
  j["extra"] = rep.extra;
  j["flags"] = rep.flags;
  ordered_json sweep = ordered_json::array();
  for (const auto& pt : rep.sweep) {
    ordered_json row;
    row["eps"] = pt.eps;
    row["lhs"] = pt.lhs;
    row["rhs_total"] = pt.rhs_total;
    row["ratio"] = pt.ratio;
    row["terms"] = pt.terms;
    sweep.push_back(row);
  }
  j["sweep"] = sweep;
  return j;
}

ordered_json to_json(const ConstantReport& rep) {
  ordered_json j;
  j["cylinder"] = rep.cylinder;
  ordered_json t;
  for (const auto& [k, v] : rep.round_target) t["k" + std::to_string(k)] = v;
  j["round_target_2_over_k3"] = t;
  if (rep.al_target > 0) {
    j["b2"] = rep.b2;
    j["al_target_4B2"] = rep.al_target;
  }
  j["measured"] = rep.measured;
  return j;
}

std::string to_text(const InequalityReport& rep) {
  std::ostringstream os;
  os << "== " << rep.name << " ==\n";
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-12s %-14s %-14s %-10s\n", "eps", "lhs",
                "rhs", "ratio");
  os << buf;
  for (const auto& pt : rep.sweep) {
    std::snprintf(buf, sizeof(buf), "%-12.4g %-14.6g %-14.6g %-10.4g\n", pt.eps,
                  pt.lhs, pt.rhs_total, pt.ratio);
    os << buf;
  }
  std::snprintf(buf, sizeof(buf), "implied constant %.6g, stability %.4g\n",
                rep.implied_constant, rep.stability_factor());
  os << buf;
  for (const auto& [k, v] : rep.slopes) {
    std::snprintf(buf, sizeof(buf), "slope[%s] = %.4f\n", k.c_str(), v);
    os << buf;
  }
  os << "tail_bound " << rep.tail_bound << "\n";
  return os.str();
}

void write_reports_json(const std::string& path,
                        const std::vector<InequalityReport>& reports,
                        const ordered_json& manifest) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["manifest"] = manifest;
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  j["reports"] = arr;
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << j.dump(2) << "\n";
}

void write_sweep_csv(const std::string& path, const InequalityReport& rep) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  std::vector<std::string> term_keys;
  if (!rep.sweep.empty())
    for (const auto& [k, v] : rep.sweep.front().terms) term_keys.push_back(k);
  os << "eps,lhs,rhs_total,ratio";
  for (const auto& k : term_keys) os << "," << k;
  os << "\n";
  char buf[64];
  for (const auto& pt : rep.sweep) {
    std::snprintf(buf, sizeof(buf), "%.17g", pt.eps);
    os << buf;
    std::snprintf(buf, sizeof(buf), ",%.17g", pt.lhs);
    os << buf;
    std::snprintf(buf, sizeof(buf), ",%.17g", pt.rhs_total);
    os << buf;
    std::snprintf(buf, sizeof(buf), ",%.17g", pt.ratio);
    os << buf;
    for (const auto& k : term_keys) {
      auto it = pt.terms.find(k);
      std::snprintf(buf, sizeof(buf), ",%.17g",
                    it == pt.terms.end() ? 0.0 : it->second);
      os << buf;
    }
    os << "\n";
  }
}

void write_variation_csv(const std::string& path,
                         const std::vector<VariationRow>& rows) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << "quantity,analytic_scale,max_abs_gap,rel_gap,richardson_error\n";
  char buf[192];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g\n",
                  r.quantity.c_str(), r.analytic_scale, r.max_abs_gap,
                  r.rel_gap, r.richardson_error);
    os << buf;
  }
}

}  // namespace shrinkerlab
