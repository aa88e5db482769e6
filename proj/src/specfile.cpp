#include "qgd/specfile.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace qgd {

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) {
    if (t[0] == '#') break;
    out.push_back(t);
  }
  return out;
}

int lookup(const std::map<std::string, int>& m, const std::string& key,
           int line, const std::string& kind) {
  auto it = m.find(key);
  if (it == m.end()) throw ParseError(line, "unknown " + kind + " '" + key + "'");
  return it->second;
}

double parseFloat(const std::string& s, int line) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "expected a number, got '" + s + "'");
  }
}

}  // namespace

GroupoidSpec parseGroupoidSpec(std::istream& in) {
  std::vector<std::string> units, arrows;
  std::map<std::string, int> unitIdx, arrowIdx;
  std::vector<int> src, tgt;
  struct Comp { int x, y, z, line; };
  std::vector<Comp> comps;
  std::vector<std::pair<int, int>> invs;
  std::map<int, double> measures, haars;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = tokens(line);
    if (t.empty()) continue;
    const std::string& kw = t[0];
    if (kw == "unit") {
      if (t.size() != 2) throw ParseError(lineno, "expected: unit <name>");
      if (unitIdx.count(t[1])) throw ParseError(lineno, "duplicate unit '" + t[1] + "'");
      unitIdx[t[1]] = static_cast<int>(units.size());
      units.push_back(t[1]);
    } else if (kw == "arrow") {
      // arrow <name> : <src> -> <tgt>
      if (t.size() != 6 || t[2] != ":" || t[4] != "->")
        throw ParseError(lineno, "expected: arrow <name> : <src> -> <tgt>");
      if (arrowIdx.count(t[1])) throw ParseError(lineno, "duplicate arrow '" + t[1] + "'");
      arrowIdx[t[1]] = static_cast<int>(arrows.size());
      arrows.push_back(t[1]);
      src.push_back(lookup(unitIdx, t[3], lineno, "unit"));
      tgt.push_back(lookup(unitIdx, t[5], lineno, "unit"));
    } else if (kw == "compose") {
      if (t.size() != 5 || t[3] != "=")
        throw ParseError(lineno, "expected: compose <x> <y> = <z>");
      comps.push_back({lookup(arrowIdx, t[1], lineno, "arrow"),
                       lookup(arrowIdx, t[2], lineno, "arrow"),
                       lookup(arrowIdx, t[4], lineno, "arrow"), lineno});
    } else if (kw == "inverse") {
      if (t.size() != 4 || t[2] != "=")
        throw ParseError(lineno, "expected: inverse <x> = <y>");
      invs.emplace_back(lookup(arrowIdx, t[1], lineno, "arrow"),
                        lookup(arrowIdx, t[3], lineno, "arrow"));
    } else if (kw == "measure") {
      if (t.size() != 4 || t[2] != "=")
        throw ParseError(lineno, "expected: measure <unit> = <float>");
      measures[lookup(unitIdx, t[1], lineno, "unit")] = parseFloat(t[3], lineno);
    } else if (kw == "haar") {
      if (t.size() != 4 || t[2] != "=")
        throw ParseError(lineno, "expected: haar <arrow> = <float>");
      haars[lookup(arrowIdx, t[1], lineno, "arrow")] = parseFloat(t[3], lineno);
    } else {
      throw ParseError(lineno, "unknown directive '" + kw + "'");
    }
  }

  const int nA = static_cast<int>(arrows.size());
  std::vector<std::vector<int>> comp(nA, std::vector<int>(nA, -1));
  for (const auto& c : comps) {
    if (comp[c.x][c.y] != -1 && comp[c.x][c.y] != c.z)
      throw ParseError(c.line, "conflicting composition for (" + arrows[c.x] +
                                   ", " + arrows[c.y] + ")");
    comp[c.x][c.y] = c.z;
  }
  std::vector<int> inv(nA, -1);
  for (auto [x, y] : invs) {
    inv[x] = y;
    if (inv[y] == -1) inv[y] = x;
  }
  for (int x = 0; x < nA; ++x)
    if (inv[x] == -1) throw InvalidGroupoid("missing inverse for arrow " + arrows[x]);

  GroupoidSpec spec{makeGroupoid(units, arrows, src, tgt, comp, inv), {}, {}};
  spec.haar = countingHaar(spec.g);
  for (auto [x, w] : haars) spec.haar.weight[x] = w;
  if (!haars.empty()) spec.haar = haarFromWeights(spec.g, spec.haar.weight);
  spec.measure.assign(spec.g.nUnits(), 1.0);
  for (auto [u, w] : measures) spec.measure[u] = w;
  return spec;
}

GroupoidSpec parseGroupoidSpecFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open groupoid spec file: " + path);
  return parseGroupoidSpec(in);
}

GroupoidSpec parseGroupoidSpecString(const std::string& text) {
  std::istringstream in(text);
  return parseGroupoidSpec(in);
}

std::string writeGroupoidSpec(const GroupoidSpec& spec) {
  std::ostringstream out;
  const auto& g = spec.g;
  for (const auto& u : g.unit_names) out << "unit " << u << "\n";
  for (int x = 0; x < g.nArrows(); ++x)
    out << "arrow " << g.arrow_names[x] << " : " << g.unit_names[g.src[x]]
        << " -> " << g.unit_names[g.tgt[x]] << "\n";
  for (int x = 0; x < g.nArrows(); ++x)
    for (int y = 0; y < g.nArrows(); ++y)
      if (g.comp[x][y] >= 0)
        out << "compose " << g.arrow_names[x] << " " << g.arrow_names[y]
            << " = " << g.arrow_names[g.comp[x][y]] << "\n";
  for (int x = 0; x < g.nArrows(); ++x)
    out << "inverse " << g.arrow_names[x] << " = " << g.arrow_names[g.inv[x]]
        << "\n";
  for (int u = 0; u < g.nUnits(); ++u)
    out << "measure " << g.unit_names[u] << " = " << spec.measure[u] << "\n";
  for (int x = 0; x < g.nArrows(); ++x)
    out << "haar " << g.arrow_names[x] << " = " << spec.haar.weight[x] << "\n";
  return out.str();
}

}  // namespace qgd
