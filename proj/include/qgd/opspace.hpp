#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "qgd/errors.hpp"

namespace qgd {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Index = Eigen::Index;

// Relative singular/eigenvalue cutoff used for all rank decisions:
// values below kRankTol * max(largest, 1) count as zero.
inline constexpr double kRankTol = 1e-9;

// Default residual tolerance for verification checks.
inline constexpr double kDefaultTol = 1e-8;

/// A finite-dimensional Hilbert space: a label, a dimension and named basis
/// vectors. Identity is by pointer; labels are for reports.
struct FHilbert {
  std::string label;
  std::vector<std::string> basis_names;  // size == dim
  Index dim() const { return static_cast<Index>(basis_names.size()); }
};

using Space = std::shared_ptr<const FHilbert>;

Space makeSpace(std::string label, std::vector<std::string> names);
Space makeSpace(std::string label, Index dim);

/// A concrete operator between two labeled spaces.
struct Op {
  Space dom, cod;
  Mat m;  // cod.dim x dom.dim
};

Op makeOp(Space dom, Space cod, Mat m);

inline Eigen::Map<const Vec> vecOf(const Mat& m) {
  return Eigen::Map<const Vec>(m.data(), m.size());
}
Mat unvec(const Vec& v, Index rows, Index cols);

double opNorm(const Mat& m);       // largest singular value
double hsNorm(const Mat& m);       // Frobenius
Cplx hsInner(const Mat& a, const Mat& b);

/// Orthonormal basis (columns) of the null space of m, cutoff relative to
/// the largest singular value.
Mat nullspace(const Mat& m, double relTol = kRankTol);
Index matRank(const Mat& m, double relTol = kRankTol);

/// Moore-Penrose pseudo-inverse with relative cutoff.
Mat pinv(const Mat& m, double relTol = kRankTol);

/// Least-squares solve of X * A = B; fails if the residual exceeds
/// tol * max(1, |B|).
Mat solveThrough(const Mat& A, const Mat& B, double tol,
                 const std::string& what);

/// A closed subspace of L(dom, cod) in canonical form: a Hilbert-Schmidt
/// orthonormal basis obtained by singular-value thresholding.
struct OperatorSpace {
  Space dom, cod;
  std::vector<Mat> basis;

  Index dim() const { return static_cast<Index>(basis.size()); }
  Index rows() const { return cod->dim(); }
  Index cols() const { return dom->dim(); }

  Vec coords(const Mat& x) const;      // HS inner products against the basis
  Mat fromCoords(const Vec& c) const;
  double residual(const Mat& x) const; // |x - projection onto the span|
  bool containsOp(const Mat& x, double tol = kDefaultTol) const;
  /// Stacked vectorized basis, one column per element.
  Mat stacked() const;
};

OperatorSpace spanClosure(Space dom, Space cod, const std::vector<Mat>& ops);
OperatorSpace spanClosure(const std::vector<Op>& ops);
/// Wrap an already HS-orthonormal family without re-orthogonalizing
/// (asserts orthonormality); keeps the given deterministic order.
OperatorSpace fromOrthonormal(Space dom, Space cod, std::vector<Mat> ops);

OperatorSpace productSpace(const OperatorSpace& x, const OperatorSpace& y);
OperatorSpace adjointSpace(const OperatorSpace& x);
OperatorSpace sumSpace(const OperatorSpace& x, const OperatorSpace& y);
OperatorSpace intersectSpace(const OperatorSpace& x, const OperatorSpace& y);

/// True iff y is contained in x: every y-basis element projects onto x with
/// relative residual at most tol.
bool containsSpace(const OperatorSpace& x, const OperatorSpace& y,
                   double tol = kDefaultTol);
bool equalsSpace(const OperatorSpace& x, const OperatorSpace& y,
                 double tol = kDefaultTol);
/// Largest relative projection residual of y's basis onto x (0 if contained).
double containResidual(const OperatorSpace& x, const OperatorSpace& y);
double equalsResidual(const OperatorSpace& x, const OperatorSpace& y);

/// Commutant of a set of operators on a square space, in canonical form.
OperatorSpace commutant(const OperatorSpace& a);

bool isCStarAlgebra(const OperatorSpace& x, double tol = kDefaultTol);

/// [X H] = H nondegeneracy: the images of the basis span the codomain.
bool actsNondegenerately(const OperatorSpace& x);

/// Multiplier set M(gamma) = {T : T B <= gamma, T* gamma <= B}.
OperatorSpace multiplierSpace(const OperatorSpace& gamma,
                              const OperatorSpace& b);

}  // namespace qgd
