#pragma once

#include <istream>
#include <string>

#include "qgd/groupoid.hpp"

namespace qgd {

/// A groupoid together with optional Haar weights and unit measure read from
/// a spec file.
struct GroupoidSpec {
  FiniteGroupoid g;
  HaarSystem haar;            // counting unless overridden
  std::vector<double> measure;  // 1.0 unless overridden
};

/// Line-based format:
///   unit <name>
///   arrow <name> : <src> -> <tgt>
///   compose <x> <y> = <z>
///   inverse <x> = <y>
///   measure <unit> = <float>
///   haar <arrow> = <float>
/// with '#' comments. Throws ParseError with the offending line number.
GroupoidSpec parseGroupoidSpec(std::istream& in);
GroupoidSpec parseGroupoidSpecFile(const std::string& path);
GroupoidSpec parseGroupoidSpecString(const std::string& text);

/// Serialize in the same format (used for round trips and by the CLI).
std::string writeGroupoidSpec(const GroupoidSpec& spec);

}  // namespace qgd
