#pragma once

#include <stdexcept>
#include <string>

namespace shrinkerlab {

// Numerical aborts carry a stable name so the CLI can map them to exit
// diagnostics without parsing messages.
class LabError : public std::runtime_error {
 public:
  LabError(std::string name, const std::string& msg)
      : std::runtime_error(msg), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

struct NoSuchCurve : LabError {
  explicit NoSuchCurve(const std::string& msg) : LabError("NoSuchCurve", msg) {}
};

struct NoConvergence : LabError {
  explicit NoConvergence(const std::string& msg) : LabError("NoConvergence", msg) {}
};

struct MeanCurvatureVanishes : LabError {
  explicit MeanCurvatureVanishes(const std::string& msg)
      : LabError("MeanCurvatureVanishes", msg) {}
};

struct DegenerateMetric : LabError {
  explicit DegenerateMetric(const std::string& msg)
      : LabError("DegenerateMetric", msg) {}
};

struct GraphRegularityExceeded : LabError {
  explicit GraphRegularityExceeded(const std::string& msg)
      : LabError("GraphRegularityExceeded", msg) {}
};

struct IllConditionedGram : LabError {
  explicit IllConditionedGram(const std::string& msg)
      : LabError("IllConditionedGram", msg) {}
};

struct UnsupportedNorm : LabError {
  explicit UnsupportedNorm(const std::string& msg)
      : LabError("UnsupportedNorm", msg) {}
};

struct BadField : LabError {
  explicit BadField(const std::string& msg) : LabError("BadField", msg) {}
};

struct IoError : LabError {
  explicit IoError(const std::string& msg) : LabError("IoError", msg) {}
};

}  // namespace shrinkerlab
