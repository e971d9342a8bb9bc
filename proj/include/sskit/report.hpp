#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace sskit {

using Json = nlohmann::ordered_json;

/// Residuals at or below this are treated as exact on the grid; a convergence
/// entry whose residuals all sit below it passes without a fitted order.
inline constexpr double kExactnessFloor = 1e-12;
/// Same for identities evaluated through finite differences: rounding alone gives ~eps/h.
inline constexpr double kFdFloor = 1e-9;

struct Check {
  std::string label;
  std::string anchor;  // descriptive name of the identity being checked
  double residual = 0.0;
  double tolerance = 0.0;
  Json meta = Json::object();
  bool pass = false;
};

struct Convergence {
  std::string label;
  std::string anchor;
  std::vector<double> resolutions;
  std::vector<double> residuals;
  double fitted_order = 0.0;
  double min_order = 0.0;
  double floor = kExactnessFloor;
  bool at_floor = false;
  Json meta = Json::object();
  bool pass = false;
};

class VerificationReport {
 public:
  explicit VerificationReport(std::string suite, Json config = Json::object());

  /// residual <= tolerance; NaN never passes.
  bool check(const std::string& label, const std::string& anchor, double residual, double tolerance,
             Json meta = Json::object());
  /// Boolean outcome recorded as residual 0 (pass) or 1 (fail) with tolerance 0.
  bool require(const std::string& label, const std::string& anchor, bool ok, Json meta = Json::object());
  /// Fitted order over >= 2 resolutions must reach min_order unless every residual is at the floor.
  bool converge(const std::string& label, const std::string& anchor, std::vector<double> resolutions,
                std::vector<double> residuals, double min_order, double floor = kExactnessFloor,
                Json meta = Json::object());
  /// Informational entry, never affects the verdict.
  void note(const std::string& label, Json value);

  bool passed() const;
  const std::string& suite() const { return suite_; }
  const std::vector<Check>& checks() const { return checks_; }
  const std::vector<Convergence>& convergence() const { return conv_; }
  Json to_json() const;
  /// One line per check, for terminal output.
  std::string summary() const;

 private:
  std::string suite_;
  Json config_;
  std::vector<Check> checks_;
  std::vector<Convergence> conv_;
  Json notes_ = Json::object();
};

}  // namespace sskit
