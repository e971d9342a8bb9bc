#pragma once

#include "sskit/report.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sskit {

/// Zero / empty fields fall back to the suite's defaults.
struct RunConfig {
  std::string algebra;  // built-in name or JSON path
  std::string triple;   // Manin triple name or JSON path
  int grid = 0;
  double fd_step = 0.0;
  int samples = 0;
  std::uint64_t seed = 1;
  double tol_scale = 1.0;
  int fuzz = 2000;

  Json to_json() const;
};

const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite or an invalid config.
VerificationReport run_suite(const std::string& name, const RunConfig& cfg);

}  // namespace sskit
