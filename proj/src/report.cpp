#include "wkh/report.hpp"

#include <cstdio>

#include <algorithm>
#include <cmath>

namespace wkh {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

bool Report::add(std::string name, std::string tag, double residual, std::string note) {
  const bool ok = std::isfinite(residual) && residual <= tolerance_;
  checks_.push_back({std::move(name), std::move(tag), residual, ok, std::move(note)});
  return ok;
}

bool Report::require(std::string name, std::string tag, bool ok, std::string note) {
  checks_.push_back({std::move(name), std::move(tag), ok ? 0.0 : 1.0, ok, std::move(note)});
  return ok;
}

void Report::info(std::string name, std::string tag, std::string note) {
  checks_.push_back({std::move(name), std::move(tag), 0.0, true, std::move(note)});
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (const auto& c : other.checks_) {
    Check copy = c;
    if (!prefix.empty()) copy.name = prefix + "." + copy.name;
    checks_.push_back(std::move(copy));
  }
}

bool Report::all_pass() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass; });
}

const Check* Report::find(const std::string& name) const {
  for (const auto& c : checks_)
    if (c.name == name) return &c;
  return nullptr;
}

double Report::max_residual() const {
  double m = 0.0;
  for (const auto& c : checks_) m = std::max(m, c.residual);
  return m;
}

std::string Report::failures() const {
  std::string out;
  for (const auto& c : checks_) {
    if (c.pass) continue;
    if (!out.empty()) out += ", ";
    out += c.name;
  }
  return out;
}

}  // namespace wkh
