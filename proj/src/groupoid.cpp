#include "qgd/groupoid.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qgd {

std::vector<int> FiniteGroupoid::fiberR(int u) const {
  std::vector<int> out;
  for (int x = 0; x < nArrows(); ++x)
    if (tgt[x] == u) out.push_back(x);
  return out;
}

std::vector<int> FiniteGroupoid::fiberS(int u) const {
  std::vector<int> out;
  for (int x = 0; x < nArrows(); ++x)
    if (src[x] == u) out.push_back(x);
  return out;
}

std::vector<std::pair<int, int>> FiniteGroupoid::pairsSR() const {
  std::vector<std::pair<int, int>> out;
  for (int x = 0; x < nArrows(); ++x)
    for (int y = 0; y < nArrows(); ++y)
      if (src[x] == tgt[y]) out.emplace_back(x, y);
  return out;
}

std::vector<std::pair<int, int>> FiniteGroupoid::pairsRR() const {
  std::vector<std::pair<int, int>> out;
  for (int x = 0; x < nArrows(); ++x)
    for (int y = 0; y < nArrows(); ++y)
      if (tgt[x] == tgt[y]) out.emplace_back(x, y);
  return out;
}

bool FiniteGroupoid::isTransitive() const {
  for (int u = 0; u < nUnits(); ++u)
    for (int v = 0; v < nUnits(); ++v) {
      bool found = false;
      for (int x = 0; x < nArrows() && !found; ++x)
        found = tgt[x] == u && src[x] == v;
      if (!found) return false;
    }
  return true;
}

FiniteGroupoid makeGroupoid(std::vector<std::string> unit_names,
                            std::vector<std::string> arrow_names,
                            std::vector<int> src, std::vector<int> tgt,
                            std::vector<std::vector<int>> comp,
                            std::vector<int> inv) {
  FiniteGroupoid g;
  g.unit_names = std::move(unit_names);
  g.arrow_names = std::move(arrow_names);
  g.src = std::move(src);
  g.tgt = std::move(tgt);
  g.comp = std::move(comp);
  g.inv = std::move(inv);

  const int nU = g.nUnits(), nA = g.nArrows();
  auto arrow = [&](int x) { return g.arrow_names[x]; };

  if (static_cast<int>(g.src.size()) != nA ||
      static_cast<int>(g.tgt.size()) != nA ||
      static_cast<int>(g.inv.size()) != nA ||
      static_cast<int>(g.comp.size()) != nA)
    throw InvalidGroupoid("table sizes do not match the arrow count");
  for (int x = 0; x < nA; ++x) {
    if (g.src[x] < 0 || g.src[x] >= nU || g.tgt[x] < 0 || g.tgt[x] >= nU)
      throw InvalidGroupoid("arrow " + arrow(x) + " has an out-of-range unit");
    if (g.inv[x] < 0 || g.inv[x] >= nA)
      throw InvalidGroupoid("inverse of " + arrow(x) + " is out of range");
    if (static_cast<int>(g.comp[x].size()) != nA)
      throw InvalidGroupoid("composition row of " + arrow(x) + " has wrong size");
  }

  // comp defined exactly on composable pairs, with r(xy)=r(x), s(xy)=s(y)
  for (int x = 0; x < nA; ++x)
    for (int y = 0; y < nA; ++y) {
      int z = g.comp[x][y];
      if (g.src[x] != g.tgt[y]) {
        if (z != -1)
          throw InvalidGroupoid("composition defined on non-composable pair (" +
                                arrow(x) + ", " + arrow(y) + ")");
        continue;
      }
      if (z < 0 || z >= nA)
        throw InvalidGroupoid("composition missing for composable pair (" +
                              arrow(x) + ", " + arrow(y) + ")");
      if (g.tgt[z] != g.tgt[x])
        throw InvalidGroupoid("r(xy) != r(x) at (" + arrow(x) + ", " + arrow(y) + ")");
      if (g.src[z] != g.src[y])
        throw InvalidGroupoid("s(xy) != s(y) at (" + arrow(x) + ", " + arrow(y) + ")");
    }

  // associativity on every composable triple
  for (int x = 0; x < nA; ++x)
    for (int y = 0; y < nA; ++y) {
      if (g.src[x] != g.tgt[y]) continue;
      for (int z = 0; z < nA; ++z) {
        if (g.src[y] != g.tgt[z]) continue;
        if (g.comp[g.comp[x][y]][z] != g.comp[x][g.comp[y][z]])
          throw InvalidGroupoid("associativity fails at (" + arrow(x) + ", " +
                                arrow(y) + ", " + arrow(z) + ")");
      }
    }

  // unit arrows: for each unit, a two-sided neutral loop
  g.unit_arrow.assign(nU, -1);
  for (int e = 0; e < nA; ++e) {
    if (g.src[e] != g.tgt[e]) continue;
    int u = g.src[e];
    bool neutral = true;
    for (int y = 0; y < nA && neutral; ++y) {
      if (g.tgt[y] == u && g.comp[e][y] != y) neutral = false;
      if (g.src[y] == u && g.comp[y][e] != y) neutral = false;
    }
    if (neutral) g.unit_arrow[u] = e;
  }
  for (int u = 0; u < nU; ++u)
    if (g.unit_arrow[u] == -1)
      throw InvalidGroupoid("no neutral arrow at unit " + g.unit_names[u]);

  // inverses
  for (int x = 0; x < nA; ++x) {
    if (g.src[g.inv[x]] != g.tgt[x] || g.tgt[g.inv[x]] != g.src[x])
      throw InvalidGroupoid("inverse of " + arrow(x) + " has wrong endpoints");
    if (g.comp[g.inv[x]][x] != g.unit_arrow[g.src[x]])
      throw InvalidGroupoid("x^-1 x is not the unit at s(x) for " + arrow(x));
    if (g.comp[x][g.inv[x]] != g.unit_arrow[g.tgt[x]])
      throw InvalidGroupoid("x x^-1 is not the unit at r(x) for " + arrow(x));
  }
  return g;
}

FiniteGroupoid unitGroupoid(int n) {
  std::vector<std::string> units, arrows;
  std::vector<int> src, tgt, inv;
  std::vector<std::vector<int>> comp(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i) {
    units.push_back("u" + std::to_string(i));
    arrows.push_back("id" + std::to_string(i));
    src.push_back(i);
    tgt.push_back(i);
    inv.push_back(i);
    comp[i][i] = i;
  }
  return makeGroupoid(units, arrows, src, tgt, comp, inv);
}

FiniteGroupoid pairGroupoid(int n) {
  std::vector<std::string> units, arrows;
  std::vector<int> src, tgt, inv;
  auto id = [n](int u, int v) { return u * n + v; };  // arrow u <- v
  for (int u = 0; u < n; ++u) units.push_back("u" + std::to_string(u));
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      arrows.push_back(std::to_string(u) + "<-" + std::to_string(v));
      tgt.push_back(u);
      src.push_back(v);
      inv.push_back(id(v, u));
    }
  std::vector<std::vector<int>> comp(n * n, std::vector<int>(n * n, -1));
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      for (int w = 0; w < n; ++w) comp[id(u, v)][id(v, w)] = id(u, w);
  return makeGroupoid(units, arrows, src, tgt, comp, inv);
}

FiniteGroupoid groupGroupoid(const std::vector<std::vector<int>>& cayley,
                             std::vector<std::string> names) {
  const int n = static_cast<int>(cayley.size());
  if (n == 0) throw InvalidGroupoid("empty cayley table");
  for (const auto& row : cayley)
    if (static_cast<int>(row.size()) != n)
      throw InvalidGroupoid("cayley table is not square");
  // identity
  int e = -1;
  for (int i = 0; i < n && e < 0; ++i) {
    bool ok = true;
    for (int j = 0; j < n; ++j) ok = ok && cayley[i][j] == j && cayley[j][i] == j;
    if (ok) e = i;
  }
  if (e < 0) throw InvalidGroupoid("cayley table has no identity");
  std::vector<int> inv(n, -1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (cayley[i][j] == e && cayley[j][i] == e) inv[i] = j;
  for (int i = 0; i < n; ++i)
    if (inv[i] < 0) throw InvalidGroupoid("cayley table has no inverse for element " +
                                          std::to_string(i));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (cayley[cayley[i][j]][k] != cayley[i][cayley[j][k]])
          throw InvalidGroupoid("cayley table is not associative");

  if (names.empty())
    for (int i = 0; i < n; ++i) names.push_back("g" + std::to_string(i));
  std::vector<int> src(n, 0), tgt(n, 0);
  std::vector<std::vector<int>> comp(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) comp[i][j] = cayley[i][j];
  return makeGroupoid({"*"}, names, src, tgt, comp, inv);
}

FiniteGroupoid cyclicGroupGroupoid(int n) {
  std::vector<std::vector<int>> cayley(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cayley[i][j] = (i + j) % n;
  return groupGroupoid(cayley);
}

FiniteGroupoid transformationGroupoid(
    const std::vector<std::vector<int>>& cayley,
    const std::vector<std::vector<int>>& action, int nPoints) {
  FiniteGroupoid grp = groupGroupoid(cayley);  // validates the group
  const int n = static_cast<int>(cayley.size());
  if (static_cast<int>(action.size()) != n)
    throw InvalidGroupoid("action table has wrong group size");
  for (const auto& row : action) {
    if (static_cast<int>(row.size()) != nPoints)
      throw InvalidGroupoid("action row has wrong point count");
    std::set<int> seen(row.begin(), row.end());
    if (static_cast<int>(seen.size()) != nPoints)
      throw InvalidGroupoid("action of a group element is not a permutation");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int p = 0; p < nPoints; ++p)
        if (action[cayley[i][j]][p] != action[i][action[j][p]])
          throw InvalidGroupoid("action is not a homomorphism");

  // arrow (g, p): p -> g.p
  auto id = [nPoints](int gidx, int p) { return gidx * nPoints + p; };
  std::vector<std::string> units, arrows;
  std::vector<int> src, tgt, inv;
  for (int p = 0; p < nPoints; ++p) units.push_back("p" + std::to_string(p));
  for (int gi = 0; gi < n; ++gi)
    for (int p = 0; p < nPoints; ++p) {
      arrows.push_back("(" + grp.arrow_names[gi] + "," + std::to_string(p) + ")");
      src.push_back(p);
      tgt.push_back(action[gi][p]);
      inv.push_back(id(grp.inv[gi], action[gi][p]));
    }
  std::vector<std::vector<int>> comp(n * nPoints,
                                     std::vector<int>(n * nPoints, -1));
  for (int gi = 0; gi < n; ++gi)
    for (int hj = 0; hj < n; ++hj)
      for (int p = 0; p < nPoints; ++p)
        comp[id(gi, action[hj][p])][id(hj, p)] = id(cayley[gi][hj], p);
  return makeGroupoid(units, arrows, src, tgt, comp, inv);
}

FiniteGroupoid disjointUnion(const FiniteGroupoid& a, const FiniteGroupoid& b) {
  std::vector<std::string> units, arrows;
  std::vector<int> src, tgt, inv;
  for (const auto& s : a.unit_names) units.push_back("L." + s);
  for (const auto& s : b.unit_names) units.push_back("R." + s);
  for (const auto& s : a.arrow_names) arrows.push_back("L." + s);
  for (const auto& s : b.arrow_names) arrows.push_back("R." + s);
  const int uA = a.nUnits(), nA = a.nArrows(), nB = b.nArrows();
  for (int x = 0; x < nA; ++x) {
    src.push_back(a.src[x]);
    tgt.push_back(a.tgt[x]);
    inv.push_back(a.inv[x]);
  }
  for (int x = 0; x < nB; ++x) {
    src.push_back(uA + b.src[x]);
    tgt.push_back(uA + b.tgt[x]);
    inv.push_back(nA + b.inv[x]);
  }
  std::vector<std::vector<int>> comp(nA + nB, std::vector<int>(nA + nB, -1));
  for (int x = 0; x < nA; ++x)
    for (int y = 0; y < nA; ++y)
      if (a.comp[x][y] >= 0) comp[x][y] = a.comp[x][y];
  for (int x = 0; x < nB; ++x)
    for (int y = 0; y < nB; ++y)
      if (b.comp[x][y] >= 0) comp[nA + x][nA + y] = nA + b.comp[x][y];
  return makeGroupoid(units, arrows, src, tgt, comp, inv);
}

FiniteGroupoid productGroupoid(const FiniteGroupoid& a,
                               const FiniteGroupoid& b) {
  const int uB = b.nUnits(), nB = b.nArrows();
  auto uid = [uB](int i, int j) { return i * uB + j; };
  auto aid = [nB](int i, int j) { return i * nB + j; };
  std::vector<std::string> units, arrows;
  std::vector<int> src, tgt, inv;
  for (int i = 0; i < a.nUnits(); ++i)
    for (int j = 0; j < uB; ++j)
      units.push_back("(" + a.unit_names[i] + "," + b.unit_names[j] + ")");
  for (int x = 0; x < a.nArrows(); ++x)
    for (int y = 0; y < nB; ++y) {
      arrows.push_back("(" + a.arrow_names[x] + "," + b.arrow_names[y] + ")");
      src.push_back(uid(a.src[x], b.src[y]));
      tgt.push_back(uid(a.tgt[x], b.tgt[y]));
      inv.push_back(aid(a.inv[x], b.inv[y]));
    }
  std::vector<std::vector<int>> comp(a.nArrows() * nB,
                                     std::vector<int>(a.nArrows() * nB, -1));
  for (int x = 0; x < a.nArrows(); ++x)
    for (int y = 0; y < nB; ++y)
      for (int x2 = 0; x2 < a.nArrows(); ++x2)
        for (int y2 = 0; y2 < nB; ++y2)
          if (a.comp[x][x2] >= 0 && b.comp[y][y2] >= 0)
            comp[aid(x, y)][aid(x2, y2)] = aid(a.comp[x][x2], b.comp[y][y2]);
  return makeGroupoid(units, arrows, src, tgt, comp, inv);
}

HaarSystem countingHaar(const FiniteGroupoid& g) {
  return HaarSystem{std::vector<double>(g.nArrows(), 1.0)};
}

HaarSystem haarFromWeights(const FiniteGroupoid& g, std::vector<double> w) {
  if (static_cast<int>(w.size()) != g.nArrows())
    throw InvalidGroupoid("haar weight count does not match arrows");
  for (double v : w)
    if (!(v > 0)) throw InvalidGroupoid("haar weights must be positive");
  HaarSystem h{std::move(w)};
  if (!verifyLeftInvariance(g, h, 1e-9))
    throw InvalidGroupoid("haar weights are not left invariant");
  return h;
}

double leftInvarianceDefect(const FiniteGroupoid& g, const HaarSystem& h) {
  double worst = 0.0;
  for (int x = 0; x < g.nArrows(); ++x) {
    // test functions: deltas on G^{r(x)}
    for (int z : g.fiberR(g.tgt[x])) {
      double lhs = 0.0;
      for (int y : g.fiberR(g.src[x]))
        if (g.comp[x][y] == z) lhs += h(y);
      worst = std::max(worst, std::abs(lhs - h(z)));
    }
  }
  return worst;
}

bool verifyLeftInvariance(const FiniteGroupoid& g, const HaarSystem& h,
                          double tol) {
  return leftInvarianceDefect(g, h) <= tol;
}

QuasiInvariantMeasure radonNikodym(const FiniteGroupoid& g,
                                   const HaarSystem& h,
                                   const std::vector<double>& mu) {
  if (static_cast<int>(mu.size()) != g.nUnits())
    throw NotQuasiInvariant("measure size does not match units");
  for (double v : mu)
    if (!(v > 0)) throw NotQuasiInvariant("measure must have full support");
  QuasiInvariantMeasure m;
  m.mu = mu;
  m.nu.resize(g.nArrows());
  m.nu_inv.resize(g.nArrows());
  m.D.resize(g.nArrows());
  for (int x = 0; x < g.nArrows(); ++x) m.nu[x] = mu[g.tgt[x]] * h(x);
  for (int x = 0; x < g.nArrows(); ++x) m.nu_inv[x] = m.nu[g.inv[x]];
  for (int x = 0; x < g.nArrows(); ++x) {
    if (!(m.nu_inv[x] > 0))
      throw NotQuasiInvariant("zero weight at arrow " + g.arrow_names[x]);
    m.D[x] = m.nu[x] / m.nu_inv[x];
  }
  return m;
}

double cocycleDefect(const FiniteGroupoid& g, const QuasiInvariantMeasure& m) {
  double worst = 0.0;
  for (int x = 0; x < g.nArrows(); ++x) {
    worst = std::max(worst, std::abs(m.D[x] * m.D[g.inv[x]] - 1.0));
    for (int y = 0; y < g.nArrows(); ++y)
      if (g.composable(x, y))
        worst = std::max(worst, std::abs(m.D[x] * m.D[y] - m.D[g.comp[x][y]]));
  }
  return worst;
}

}  // namespace qgd
