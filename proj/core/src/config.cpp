#include "shrinkerlab/config.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "shrinkerlab/errors.hpp"
#include "shrinkerlab/report.hpp"

namespace shrinkerlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw IoError("config line " + std::to_string(lineno) + ": bad section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw IoError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    auto bad = [&]() -> IoError {
      return IoError("config line " + std::to_string(lineno) + ": unknown key '" +
                     key + "' in section [" + section + "]");
    };

    if (section == "cylinder") {
      if (key == "profile") {
        if (val == "round")
          cfg.profile.kind = ProfileSpec::Kind::Round;
        else if (val == "al" || val == "abresch-langer")
          cfg.profile.kind = ProfileSpec::Kind::AbreschLanger;
        else
          throw IoError("config: profile must be 'round' or 'al'");
      } else if (key == "k") {
        cfg.profile.k = std::stoi(val);
      } else if (key == "p") {
        cfg.profile.p = std::stoi(val);
      } else if (key == "q") {
        cfg.profile.q = std::stoi(val);
      } else if (key == "nodes") {
        cfg.profile.nodes = std::stoi(val);
      } else if (key == "tol") {
        cfg.profile.tolerance = std::stod(val);
      } else if (key == "step") {
        cfg.profile.step = std::stod(val);
      } else if (key == "Y") {
        cfg.Y = std::stod(val);
      } else if (key == "axial") {
        cfg.axial = std::stoi(val);
      } else if (key == "ambient_dim") {
        cfg.ambient_dim = std::stoi(val);
      } else {
        throw bad();
      }
    } else if (section == "family") {
      if (key == "kind") {
        if (val == "k0")
          cfg.family = FamilyKind::PureK0;
        else if (val == "k1")
          cfg.family = FamilyKind::PureK1;
        else if (val == "h0")
          cfg.family = FamilyKind::PureH;
        else if (val == "mixed")
          cfg.family = FamilyKind::Mixed;
        else
          throw IoError("config: family kind must be k0|k1|h0|mixed");
      } else if (key == "support_radius") {
        cfg.support_radius = std::stod(val);
      } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(std::stoull(val));
      } else if (key == "eps") {
        cfg.eps_ladder = parse_list(val);
        if (cfg.eps_ladder.empty()) throw IoError("config: empty eps ladder");
        for (size_t i = 1; i < cfg.eps_ladder.size(); ++i)
          if (cfg.eps_ladder[i] >= cfg.eps_ladder[i - 1])
            throw IoError("config: eps ladder must be strictly decreasing");
      } else {
        throw bad();
      }
    } else if (section == "harness") {
      if (key == "kappa_exponent") {
        cfg.kappa_exponent = std::stod(val);
        if (!(cfg.kappa_exponent > 0 && cfg.kappa_exponent <= 1))
          throw IoError("config: kappa_exponent must lie in (0,1]");
      } else if (key == "lambda0") {
        cfg.lambda0 = std::stod(val);
      } else if (key == "C_j") {
        cfg.c_j = parse_list(val);
      } else if (key == "R") {
        cfg.R = std::stod(val);
      } else if (key == "l") {
        cfg.l = std::stoi(val);
      } else if (key == "eps2") {
        cfg.thresholds.eps2 = std::stod(val);
      } else if (key == "min_h_factor") {
        cfg.thresholds.min_h_factor = std::stod(val);
      } else {
        throw bad();
      }
    } else {
      throw IoError("config: unknown section [" + section + "]");
    }
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["cylinder"]["profile"] =
      cfg.profile.kind == ProfileSpec::Kind::Round ? "round" : "al";
  j["cylinder"]["k"] = cfg.profile.k;
  j["cylinder"]["p"] = cfg.profile.p;
  j["cylinder"]["q"] = cfg.profile.q;
  j["cylinder"]["nodes"] = cfg.profile.nodes;
  j["cylinder"]["tol"] = cfg.profile.tolerance;
  j["cylinder"]["step"] = cfg.profile.step;
  j["cylinder"]["Y"] = cfg.Y;
  j["cylinder"]["axial"] = cfg.axial;
  j["cylinder"]["ambient_dim"] = cfg.ambient_dim;
  switch (cfg.family) {
    case FamilyKind::PureK0: j["family"]["kind"] = "k0"; break;
    case FamilyKind::PureK1: j["family"]["kind"] = "k1"; break;
    case FamilyKind::PureH: j["family"]["kind"] = "h0"; break;
    case FamilyKind::Mixed: j["family"]["kind"] = "mixed"; break;
  }
  j["family"]["support_radius"] = cfg.support_radius;
  j["family"]["seed"] = cfg.seed;
  j["family"]["eps"] = cfg.eps_ladder;
  j["harness"]["kappa_exponent"] = cfg.kappa_exponent;
  j["harness"]["lambda0"] = cfg.lambda0;
  j["harness"]["C_j"] = cfg.c_j;
  j["harness"]["R"] = cfg.R;
  j["harness"]["l"] = cfg.l;
  j["harness"]["eps2"] = cfg.thresholds.eps2;
  j["harness"]["min_h_factor"] = cfg.thresholds.min_h_factor;
  return j;
}

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["config_path"] = config_path;
  j["config"] = config_to_json(resolved);
  j["seed"] = seed;
  j["schema_versions"]["report"] = kReportSchemaVersion;
  j["schema_versions"]["curve"] = kCurveSchemaVersion;
  j["schema_versions"]["snapshot"] = kSnapshotSchemaVersion;
  j["wall_clock"] = wall_clock;
  return j;
}

RunManifest make_manifest(const std::string& config_path,
                          const ExperimentConfig& cfg) {
  RunManifest m;
  m.config_path = config_path;
  m.resolved = cfg;
  m.seed = cfg.seed;
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[64];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  m.wall_clock = buf;
  return m;
}

}  // namespace shrinkerlab
