#include "qgd/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace qgd {

void Report::add(std::string name, double residual, double tol,
                 std::string tag) {
  items.push_back(
      {std::move(name), residual <= tol, residual, std::move(tag)});
}

void Report::addBool(std::string name, bool ok, std::string tag) {
  items.push_back({std::move(name), ok, ok ? 0.0 : 1.0, std::move(tag)});
}

void Report::merge(const Report& other) {
  items.insert(items.end(), other.items.begin(), other.items.end());
}

bool Report::allPass() const {
  return std::all_of(items.begin(), items.end(),
                     [](const CheckResult& c) { return c.pass; });
}

double Report::maxResidual() const {
  double m = 0.0;
  for (const auto& c : items) m = std::max(m, c.residual);
  return m;
}

int Report::passed() const {
  int n = 0;
  for (const auto& c : items) n += c.pass ? 1 : 0;
  return n;
}

namespace {
std::string fmtResidual(double r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", r);
  return buf;
}
}  // namespace

std::string toText(const Report& r) {
  std::ostringstream out;
  for (const auto& c : r.items)
    out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
        << "  residual=" << fmtResidual(c.residual) << "  (" << c.tag << ")\n";
  out << r.passed() << "/" << r.total() << " checks passed, max residual "
      << fmtResidual(r.maxResidual()) << "\n";
  return out.str();
}

std::string toJson(const Report& r, double tol) {
  nlohmann::json j;
  j["tol"] = tol;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : r.items)
    j["checks"].push_back({{"name", c.name},
                           {"pass", c.pass},
                           {"residual", c.residual},
                           {"tag", c.tag}});
  j["summary"] = {{"total", r.total()},
                  {"passed", r.passed()},
                  {"max_residual", r.maxResidual()}};
  return j.dump(2);
}

Report fromJson(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Report r;
  for (const auto& c : j.at("checks"))
    r.items.push_back({c.at("name").get<std::string>(),
                       c.at("pass").get<bool>(),
                       c.at("residual").get<double>(),
                       c.at("tag").get<std::string>()});
  return r;
}

}  // namespace qgd
