#pragma once

#include <stdexcept>
#include <string>

namespace qgd {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidGroupoid : Error {
  explicit InvalidGroupoid(const std::string& detail)
      : Error("invalid groupoid: " + detail) {}
};

struct NotQuasiInvariant : Error {
  explicit NotQuasiInvariant(const std::string& detail)
      : Error("measure not quasi-invariant: " + detail) {}
};

struct ParseError : Error {
  int line;
  ParseError(int line_, const std::string& detail)
      : Error("parse error at line " + std::to_string(line_) + ": " + detail),
        line(line_) {}
};

struct ShapeMismatch : Error {
  explicit ShapeMismatch(const std::string& detail)
      : Error("shape mismatch: " + detail) {}
};

struct BaseAxiomFailed : Error {
  explicit BaseAxiomFailed(const std::string& which)
      : Error("base axiom failed: " + which) {}
};

struct ModuleAxiomFailed : Error {
  explicit ModuleAxiomFailed(const std::string& which)
      : Error("module axiom failed: " + which) {}
};

struct NotInAlgebra : Error {
  explicit NotInAlgebra(const std::string& detail)
      : Error("operator not in the required space: " + detail) {}
};

struct NotInCommutant : Error {
  explicit NotInCommutant(const std::string& detail)
      : Error("operator not in the required commutant: " + detail) {}
};

struct InconsistentSystem : Error {
  explicit InconsistentSystem(const std::string& detail)
      : Error("overdetermined system inconsistent: " + detail) {}
};

struct NotNormalizedFixed : Error {
  explicit NotNormalizedFixed(const std::string& detail)
      : Error("not a normalized fixed element: " + detail) {}
};

struct NotNormalizedCofixed : Error {
  explicit NotNormalizedCofixed(const std::string& detail)
      : Error("not a normalized cofixed element: " + detail) {}
};

struct CocycleViolation : Error {
  explicit CocycleViolation(const std::string& detail)
      : Error("cocycle violated: " + detail) {}
};

struct NotGroupoidPMU : Error {
  explicit NotGroupoidPMU(const std::string& detail)
      : Error("operation requires a groupoid-built unitary: " + detail) {}
};

}  // namespace qgd
