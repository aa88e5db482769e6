#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qgd/errors.hpp"

namespace qgd {

/// A finite groupoid with integer-indexed units and arrows and a dense
/// composition table. Immutable after construction.
struct FiniteGroupoid {
  std::vector<std::string> unit_names;
  std::vector<std::string> arrow_names;
  std::vector<int> src;         // s(x), per arrow
  std::vector<int> tgt;         // r(x), per arrow
  std::vector<std::vector<int>> comp;  // comp[x][y] = xy, or -1 if not composable
  std::vector<int> inv;         // x^{-1}
  std::vector<int> unit_arrow;  // per unit

  int nUnits() const { return static_cast<int>(unit_names.size()); }
  int nArrows() const { return static_cast<int>(arrow_names.size()); }
  bool composable(int x, int y) const { return src[x] == tgt[y]; }
  int compose(int x, int y) const { return comp[x][y]; }

  std::vector<int> fiberR(int u) const;  // G^u = {x : r(x) = u}
  std::vector<int> fiberS(int u) const;  // G_u = {x : s(x) = u}
  std::vector<std::pair<int, int>> pairsSR() const;  // {(x,y) : s(x) = r(y)}
  std::vector<std::pair<int, int>> pairsRR() const;  // {(x,y) : r(x) = r(y)}
  bool isTransitive() const;
};

/// Validates all groupoid axioms; throws InvalidGroupoid naming the first
/// violated one.
FiniteGroupoid makeGroupoid(std::vector<std::string> unit_names,
                            std::vector<std::string> arrow_names,
                            std::vector<int> src, std::vector<int> tgt,
                            std::vector<std::vector<int>> comp,
                            std::vector<int> inv);

FiniteGroupoid unitGroupoid(int n);
FiniteGroupoid pairGroupoid(int n);
/// cayley[i][j] = index of g_i g_j; must describe a group.
FiniteGroupoid groupGroupoid(const std::vector<std::vector<int>>& cayley,
                             std::vector<std::string> names = {});
FiniteGroupoid cyclicGroupGroupoid(int n);
/// Action groupoid for a group acting on a finite set; action[g][p] is the
/// image point and must define a homomorphism into permutations.
FiniteGroupoid transformationGroupoid(
    const std::vector<std::vector<int>>& cayley,
    const std::vector<std::vector<int>>& action, int nPoints);
FiniteGroupoid disjointUnion(const FiniteGroupoid& a, const FiniteGroupoid& b);
FiniteGroupoid productGroupoid(const FiniteGroupoid& a,
                               const FiniteGroupoid& b);

/// Left Haar system, one positive weight per arrow.
struct HaarSystem {
  std::vector<double> weight;
  double operator()(int x) const { return weight[x]; }
};

HaarSystem countingHaar(const FiniteGroupoid& g);
HaarSystem haarFromWeights(const FiniteGroupoid& g, std::vector<double> w);

/// Left invariance by direct summation: for every arrow x and every
/// delta-function f on the target fiber, sum over the source fiber of
/// f(x y) w(y) equals the direct fiber sum. Returns the worst deviation.
double leftInvarianceDefect(const FiniteGroupoid& g, const HaarSystem& h);
bool verifyLeftInvariance(const FiniteGroupoid& g, const HaarSystem& h,
                          double tol = 1e-12);

struct QuasiInvariantMeasure {
  std::vector<double> mu;  // per unit, positive
  std::vector<double> nu;  // nu(x) = mu(r(x)) w(x)
  std::vector<double> nu_inv;
  std::vector<double> D;   // nu / nu_inv
};

QuasiInvariantMeasure radonNikodym(const FiniteGroupoid& g,
                                   const HaarSystem& h,
                                   const std::vector<double>& mu);

double cocycleDefect(const FiniteGroupoid& g, const QuasiInvariantMeasure& m);

}  // namespace qgd
