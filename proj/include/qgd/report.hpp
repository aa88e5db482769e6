#pragma once

#include <string>
#include <vector>

namespace qgd {

struct CheckResult {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  std::string tag;  // check category, e.g. "pentagon", "legs", "hopf"
};

struct Report {
  std::vector<CheckResult> items;

  void add(std::string name, double residual, double tol, std::string tag);
  void addBool(std::string name, bool ok, std::string tag);
  void merge(const Report& other);
  bool allPass() const;
  double maxResidual() const;
  int passed() const;
  int total() const { return static_cast<int>(items.size()); }
};

std::string toText(const Report& r);
std::string toJson(const Report& r, double tol);
Report fromJson(const std::string& json);

}  // namespace qgd
