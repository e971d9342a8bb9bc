#include "sskit/report.hpp"

#include "sskit/forms.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace sskit {

namespace {

// JSON has no NaN/inf; keep them visible as strings.
Json number(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

}  // namespace

VerificationReport::VerificationReport(std::string suite, Json config)
    : suite_(std::move(suite)), config_(std::move(config)) {}

bool VerificationReport::check(const std::string& label, const std::string& anchor, double residual,
                               double tolerance, Json meta) {
  Check c{label, anchor, residual, tolerance, std::move(meta), residual <= tolerance};
  checks_.push_back(std::move(c));
  return checks_.back().pass;
}

bool VerificationReport::require(const std::string& label, const std::string& anchor, bool ok, Json meta) {
  return check(label, anchor, ok ? 0.0 : 1.0, 0.0, std::move(meta));
}

bool VerificationReport::converge(const std::string& label, const std::string& anchor,
                                  std::vector<double> resolutions, std::vector<double> residuals,
                                  double min_order, double floor, Json meta) {
  if (resolutions.size() < 2 || resolutions.size() != residuals.size())
    throw std::invalid_argument("convergence entry needs >= 2 resolutions");
  Convergence c;
  c.label = label;
  c.anchor = anchor;
  c.min_order = min_order;
  c.floor = floor;
  c.meta = std::move(meta);
  c.at_floor = true;
  bool finite = true;
  for (double r : residuals) {
    c.at_floor = c.at_floor && r <= floor;
    finite = finite && std::isfinite(r);
  }
  c.fitted_order = fitted_order(resolutions, residuals);
  c.pass = finite && (c.at_floor || c.fitted_order >= min_order);
  c.resolutions = std::move(resolutions);
  c.residuals = std::move(residuals);
  conv_.push_back(std::move(c));
  return conv_.back().pass;
}

void VerificationReport::note(const std::string& label, Json value) { notes_[label] = std::move(value); }

bool VerificationReport::passed() const {
  for (const auto& c : checks_)
    if (!c.pass) return false;
  for (const auto& c : conv_)
    if (!c.pass) return false;
  return true;
}

Json VerificationReport::to_json() const {
  Json j;
  j["suite"] = suite_;
  j["config"] = config_;
  j["passed"] = passed();
  Json checks = Json::array();
  for (const auto& c : checks_) {
    Json e;
    e["label"] = c.label;
    e["anchor"] = c.anchor;
    e["residual"] = number(c.residual);
    e["tolerance"] = c.tolerance;
    e["meta"] = c.meta;
    e["pass"] = c.pass;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  Json conv = Json::array();
  for (const auto& c : conv_) {
    Json e;
    e["label"] = c.label;
    e["anchor"] = c.anchor;
    Json pts = Json::array();
    for (size_t i = 0; i < c.resolutions.size(); ++i) pts.push_back({c.resolutions[i], number(c.residuals[i])});
    e["points"] = std::move(pts);
    e["fitted_order"] = number(c.fitted_order);
    e["min_order"] = c.min_order;
    e["floor"] = c.floor;
    e["at_floor"] = c.at_floor;
    e["meta"] = c.meta;
    e["pass"] = c.pass;
    conv.push_back(std::move(e));
  }
  j["convergence"] = std::move(conv);
  j["notes"] = notes_;
  return j;
}

std::string VerificationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks_)
    os << (c.pass ? "ok   " : "FAIL ") << c.label << "  " << fmt(c.residual) << " <= " << fmt(c.tolerance) << "\n";
  for (const auto& c : conv_) {
    os << (c.pass ? "ok   " : "FAIL ") << c.label << "  order " << fmt(c.fitted_order) << " >= " << c.min_order;
    if (c.at_floor) os << " (at floor)";
    os << "\n";
  }
  os << suite_ << ": " << (passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace sskit
