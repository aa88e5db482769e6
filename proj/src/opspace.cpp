#include "qgd/opspace.hpp"

#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>

namespace qgd {

Space makeSpace(std::string label, std::vector<std::string> names) {
  auto h = std::make_shared<FHilbert>();
  h->label = std::move(label);
  h->basis_names = std::move(names);
  return h;
}

Space makeSpace(std::string label, Index dim) {
  std::vector<std::string> names;
  names.reserve(static_cast<size_t>(dim));
  for (Index i = 0; i < dim; ++i) names.push_back(std::to_string(i));
  return makeSpace(std::move(label), std::move(names));
}

Op makeOp(Space dom, Space cod, Mat m) {
  if (m.rows() != cod->dim() || m.cols() != dom->dim())
    throw ShapeMismatch("operator " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()) + " between " + dom->label +
                        " and " + cod->label);
  return Op{std::move(dom), std::move(cod), std::move(m)};
}

Mat unvec(const Vec& v, Index rows, Index cols) {
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

namespace {
// BDCSVD is used wherever the problem is large; it falls back to Jacobi
// internally for small blocks.
Eigen::BDCSVD<Mat> svdOf(const Mat& m, unsigned options = 0) {
  return Eigen::BDCSVD<Mat>(m, options);
}
}  // namespace

double opNorm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return svdOf(m).singularValues()(0);
}

double hsNorm(const Mat& m) { return m.norm(); }

Cplx hsInner(const Mat& a, const Mat& b) {
  return (a.adjoint() * b).trace();
}

namespace {

Mat stackVecs(const std::vector<Mat>& ops) {
  if (ops.empty()) return Mat(0, 0);
  Mat m(ops[0].size(), static_cast<Index>(ops.size()));
  for (size_t j = 0; j < ops.size(); ++j) {
    if (ops[j].rows() != ops[0].rows() || ops[j].cols() != ops[0].cols())
      throw ShapeMismatch("span of operators with mixed shapes");
    m.col(static_cast<Index>(j)) = vecOf(ops[j]);
  }
  return m;
}

}  // namespace

Mat nullspace(const Mat& m, double relTol) {
  if (m.cols() == 0) return Mat(0, 0);
  if (m.rows() == 0) return Mat::Identity(m.cols(), m.cols());
  auto svd = svdOf(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double cut = relTol * std::max(sv.size() > 0 ? sv(0) : 0.0, 1.0);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

Index matRank(const Mat& m, double relTol) {
  if (m.size() == 0) return 0;
  auto svd = svdOf(m);
  const auto& sv = svd.singularValues();
  double cut = relTol * std::max(sv(0), 1.0);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return rank;
}

Mat pinv(const Mat& m, double relTol) {
  if (m.size() == 0) return Mat(m.cols(), m.rows());
  auto svd = svdOf(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double cut = relTol * std::max(sv(0), 1.0);
  Vec inv(sv.size());
  for (Index i = 0; i < sv.size(); ++i)
    inv(i) = sv(i) > cut ? Cplx(1.0 / sv(i), 0.0) : Cplx(0.0, 0.0);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

Mat solveThrough(const Mat& A, const Mat& B, double tol,
                 const std::string& what) {
  // Normal equations are fine here: the spanning families are near
  // orthogonal, and the residual check below certifies the solution.
  Mat G = A * A.adjoint();
  Mat Y = B * A.adjoint();
  Mat X = G.ldlt().solve(Y.adjoint()).adjoint();
  double res = (X * A - B).norm();
  if (res > tol * std::max(1.0, B.norm())) {
    X = B * pinv(A);  // rank-deficient or ill-conditioned; retry properly
    res = (X * A - B).norm();
    if (res > tol * std::max(1.0, B.norm()))
      throw InconsistentSystem(what + " (residual " + std::to_string(res) + ")");
  }
  return X;
}

Vec OperatorSpace::coords(const Mat& x) const {
  Vec c(dim());
  for (Index i = 0; i < dim(); ++i) c(i) = hsInner(basis[i], x);
  return c;
}

Mat OperatorSpace::fromCoords(const Vec& c) const {
  Mat m = Mat::Zero(rows(), cols());
  for (Index i = 0; i < dim(); ++i) m += c(i) * basis[i];
  return m;
}

double OperatorSpace::residual(const Mat& x) const {
  return (x - fromCoords(coords(x))).norm();
}

bool OperatorSpace::containsOp(const Mat& x, double tol) const {
  return residual(x) <= tol * std::max(1.0, x.norm());
}

Mat OperatorSpace::stacked() const {
  Mat m(rows() * cols(), dim());
  for (Index j = 0; j < dim(); ++j) m.col(j) = vecOf(basis[j]);
  return m;
}

OperatorSpace spanClosure(Space dom, Space cod, const std::vector<Mat>& ops) {
  OperatorSpace out{std::move(dom), std::move(cod), {}};
  for (const auto& m : ops)
    if (m.rows() != out.rows() || m.cols() != out.cols())
      throw ShapeMismatch("span_closure between " + out.dom->label + " and " +
                          out.cod->label);
  if (ops.empty()) return out;
  Mat stacked = stackVecs(ops);
  auto svd = svdOf(stacked, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  double cut = sv.size() > 0 ? kRankTol * std::max(sv(0), 1.0) : 0.0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= cut) continue;
    out.basis.push_back(unvec(svd.matrixU().col(i), out.rows(), out.cols()));
  }
  return out;
}

OperatorSpace spanClosure(const std::vector<Op>& ops) {
  if (ops.empty()) throw ShapeMismatch("span_closure of an empty list");
  std::vector<Mat> ms;
  ms.reserve(ops.size());
  for (const auto& o : ops) {
    if (o.dom != ops[0].dom || o.cod != ops[0].cod)
      throw ShapeMismatch("span_closure of operators on different spaces");
    ms.push_back(o.m);
  }
  return spanClosure(ops[0].dom, ops[0].cod, ms);
}

OperatorSpace fromOrthonormal(Space dom, Space cod, std::vector<Mat> ops) {
  OperatorSpace out{std::move(dom), std::move(cod), std::move(ops)};
  for (size_t i = 0; i < out.basis.size(); ++i)
    for (size_t j = i; j < out.basis.size(); ++j) {
      Cplx g = hsInner(out.basis[i], out.basis[j]);
      double want = i == j ? 1.0 : 0.0;
      if (std::abs(g - want) > 1e-12)
        throw ShapeMismatch("fromOrthonormal: family is not orthonormal");
    }
  return out;
}

OperatorSpace productSpace(const OperatorSpace& x, const OperatorSpace& y) {
  if (y.cod->dim() != x.dom->dim())
    throw ShapeMismatch("product [XY]: Y codomain vs X domain");
  std::vector<Mat> prods;
  prods.reserve(static_cast<size_t>(x.dim() * y.dim()));
  for (const auto& a : x.basis)
    for (const auto& b : y.basis) prods.push_back(a * b);
  return spanClosure(y.dom, x.cod, prods);
}

OperatorSpace adjointSpace(const OperatorSpace& x) {
  std::vector<Mat> adj;
  adj.reserve(x.basis.size());
  for (const auto& a : x.basis) adj.push_back(a.adjoint());
  return spanClosure(x.cod, x.dom, adj);
}

OperatorSpace sumSpace(const OperatorSpace& x, const OperatorSpace& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw ShapeMismatch("sum of operator spaces with different shapes");
  std::vector<Mat> all = x.basis;
  all.insert(all.end(), y.basis.begin(), y.basis.end());
  return spanClosure(x.dom, x.cod, all);
}

OperatorSpace intersectSpace(const OperatorSpace& x, const OperatorSpace& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw ShapeMismatch("intersection of operator spaces with different shapes");
  Index n = x.rows() * x.cols();
  Mat bx = x.stacked(), by = y.stacked();
  // v in both spans iff (I - P_x) v = 0 and (I - P_y) v = 0.
  Mat constraints(2 * n, n);
  constraints.topRows(n) = Mat::Identity(n, n) - bx * bx.adjoint();
  constraints.bottomRows(n) = Mat::Identity(n, n) - by * by.adjoint();
  Mat ns = nullspace(constraints);
  std::vector<Mat> ops;
  for (Index j = 0; j < ns.cols(); ++j)
    ops.push_back(unvec(ns.col(j), x.rows(), x.cols()));
  return spanClosure(x.dom, x.cod, ops);
}

double containResidual(const OperatorSpace& x, const OperatorSpace& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw ShapeMismatch("containment of operator spaces with different shapes");
  double worst = 0.0;
  for (const auto& b : y.basis)
    worst = std::max(worst, x.residual(b) / std::max(1.0, b.norm()));
  return worst;
}

bool containsSpace(const OperatorSpace& x, const OperatorSpace& y, double tol) {
  return containResidual(x, y) <= tol;
}

double equalsResidual(const OperatorSpace& x, const OperatorSpace& y) {
  if (x.dim() != y.dim()) return 1.0;
  return containResidual(x, y);
}

bool equalsSpace(const OperatorSpace& x, const OperatorSpace& y, double tol) {
  // dimension equality plus one-sided containment
  return x.dim() == y.dim() && containsSpace(x, y, tol);
}

OperatorSpace commutant(const OperatorSpace& a) {
  if (a.rows() != a.cols())
    throw ShapeMismatch("commutant of a non-square space");
  Index n = a.rows();
  Mat constraints(a.dim() * n * n, n * n);
  Mat id = Mat::Identity(n, n);
  for (Index k = 0; k < a.dim(); ++k) {
    const Mat& g = a.basis[k];
    // vec(T g) - vec(g T) = (g^T (x) I - I (x) g) vec(T)
    Mat row = Eigen::kroneckerProduct(g.transpose(), id).eval() -
              Eigen::kroneckerProduct(id, g).eval();
    constraints.middleRows(k * n * n, n * n) = row;
  }
  Mat ns = nullspace(constraints);
  std::vector<Mat> ops;
  for (Index j = 0; j < ns.cols(); ++j) ops.push_back(unvec(ns.col(j), n, n));
  return spanClosure(a.dom, a.cod, ops);
}

bool isCStarAlgebra(const OperatorSpace& x, double tol) {
  if (x.rows() != x.cols()) return false;
  if (x.dim() == 0) return true;
  return containsSpace(x, productSpace(x, x), tol) &&
         equalsSpace(x, adjointSpace(x), tol);
}

bool actsNondegenerately(const OperatorSpace& x) {
  if (x.dim() == 0) return x.rows() == 0;
  Mat stacked(x.rows(), x.dim() * x.cols());
  for (Index j = 0; j < x.dim(); ++j)
    stacked.middleCols(j * x.cols(), x.cols()) = x.basis[j];
  return matRank(stacked) == x.rows();
}

OperatorSpace multiplierSpace(const OperatorSpace& gamma,
                              const OperatorSpace& b) {
  // T : K -> K', constraints T b_i in gamma and x_j^* T in gamma^* b-side:
  // T*x in B  <=>  x* T in B*.
  if (b.rows() != b.cols() || b.rows() != gamma.cols())
    throw ShapeMismatch("multiplier space shapes");
  Index rows = gamma.rows(), cols = gamma.cols();
  Index n = rows * cols;
  Index nb = cols * cols;
  Mat pg = gamma.stacked();
  Mat projGperp = Mat::Identity(n, n) - pg * pg.adjoint();
  OperatorSpace bstar = adjointSpace(b);
  Mat pb = bstar.stacked();
  Mat projBperp = Mat::Identity(nb, nb) - pb * pb.adjoint();

  Mat idr = Mat::Identity(rows, rows);
  Mat constraints(b.dim() * n + gamma.dim() * nb, n);
  Index at = 0;
  for (Index i = 0; i < b.dim(); ++i) {
    // vec(T b_i) = (b_i^T (x) I) vec(T), then kill the part outside gamma
    constraints.middleRows(at, n) =
        projGperp * Eigen::kroneckerProduct(b.basis[i].transpose(), idr).eval();
    at += n;
  }
  for (Index j = 0; j < gamma.dim(); ++j) {
    // vec(x_j^* T) = (I (x) x_j^*) vec(T), then kill the part outside B^*
    constraints.middleRows(at, nb) =
        projBperp * Eigen::kroneckerProduct(Mat::Identity(cols, cols),
                                            gamma.basis[j].adjoint().eval())
                        .eval();
    at += nb;
  }
  Mat ns = nullspace(constraints);
  std::vector<Mat> ops;
  for (Index j = 0; j < ns.cols(); ++j)
    ops.push_back(unvec(ns.col(j), rows, cols));
  return spanClosure(gamma.dom, gamma.cod, ops);
}

}  // namespace qgd
