#include "qgd/rtp.hpp"

#include <Eigen/Eigenvalues>

#include <functional>
#include <map>

namespace qgd {

namespace {

Mat concatCols(const std::vector<Mat>& blocks) {
  if (blocks.empty()) return Mat(0, 0);
  Index rows = blocks[0].rows(), cols = 0;
  for (const auto& b : blocks) cols += b.cols();
  Mat out(rows, cols);
  Index at = 0;
  for (const auto& b : blocks) {
    out.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  return out;
}

/// E such that <E u, E v> = u^* G v, with null directions dropped at the
/// relative eigenvalue cutoff. The Gram matrix is split into connected
/// components first; groupoid-derived Grams are very sparse and this keeps
/// the eigensolves small.
Mat gramQuotient(const Mat& gram) {
  const Index n = gram.rows();
  double maxAbs = 1.0;
  for (Index i = 0; i < n; ++i) maxAbs = std::max(maxAbs, std::abs(gram(i, i)));
  const double link = 1e-14 * maxAbs;

  // union-find over indices coupled by a non-negligible entry
  std::vector<Index> parent(n);
  for (Index i = 0; i < n; ++i) parent[i] = i;
  std::function<Index(Index)> find = [&](Index i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (std::abs(gram(i, j)) > link) parent[find(i)] = find(j);

  std::map<Index, std::vector<Index>> comps;
  for (Index i = 0; i < n; ++i) comps[find(i)].push_back(i);

  struct Piece {
    double eig;
    Vec row;  // length n (scattered)
  };
  std::vector<Piece> pieces;
  for (auto& [root, idx] : comps) {
    const Index m = static_cast<Index>(idx.size());
    Mat sub(m, m);
    for (Index a = 0; a < m; ++a)
      for (Index b = 0; b < m; ++b) sub(a, b) = gram(idx[a], idx[b]);
    Eigen::SelfAdjointEigenSolver<Mat> es(sub);
    for (Index k = 0; k < m; ++k) {
      double ev = es.eigenvalues()(k);
      if (ev <= 0) continue;
      Vec row = Vec::Zero(n);
      for (Index a = 0; a < m; ++a)
        row(idx[a]) = std::sqrt(ev) * std::conj(es.eigenvectors()(a, k));
      pieces.push_back({ev, std::move(row)});
    }
  }
  double top = 0.0;
  for (const auto& p : pieces) top = std::max(top, p.eig);
  double cut = kRankTol * std::max(top, 1.0);
  std::stable_sort(pieces.begin(), pieces.end(),
                   [](const Piece& a, const Piece& b) { return a.eig > b.eig; });
  std::vector<const Piece*> keep;
  for (const auto& p : pieces)
    if (p.eig > cut) keep.push_back(&p);
  Mat e(static_cast<Index>(keep.size()), n);
  for (size_t r = 0; r < keep.size(); ++r) e.row(static_cast<Index>(r)) = keep[r]->row;
  return e;
}

}  // namespace

void Rtp::buildKets(double tol) {
  const Index dK = right.dimH(), dH = left.dimH(), dBase = left.dimK();
  const Index nL = left.legDim(), nR = right.legDim();
  ket1b_.clear();
  ket2b_.clear();
  if (leftSpan_) {
    // E columns are x_i > omega_k; ket1 on basis elements is a column block.
    for (Index i = 0; i < nL; ++i) ket1b_.push_back(E_.middleCols(i * dK, dK));
    // ket2(y_j) is determined by x_i zeta_k |-> x_i > (y_j zeta_k).
    for (Index j = 0; j < nR; ++j) {
      Mat target(dim(), nL * dBase);
      for (Index i = 0; i < nL; ++i)
        target.middleCols(i * dBase, dBase) = ket1b_[i] * right.alpha.basis[j];
      ket2b_.push_back(solveThrough(left.evalMat(), target, tol,
                                    "leg-2 operator on " + space->label));
    }
  } else {
    for (Index j = 0; j < nR; ++j) ket2b_.push_back(E_.middleCols(j * dH, dH));
    for (Index i = 0; i < nL; ++i) {
      Mat target(dim(), nR * dBase);
      for (Index j = 0; j < nR; ++j)
        target.middleCols(j * dBase, dBase) = ket2b_[j] * left.alpha.basis[i];
      ket1b_.push_back(solveThrough(right.evalMat(), target, tol,
                                    "leg-1 operator on " + space->label));
    }
  }
}

Rtp makeRtp(Module l, Module r, double tol) {
  if (!sameAlgebra(l.view, r.view.dagger()))
    throw ShapeMismatch("relative tensor product needs dual base views");
  Rtp p;
  p.left = std::move(l);
  p.right = std::move(r);
  const Index nL = p.left.legDim(), nR = p.right.legDim();
  const Index dH = p.left.dimH(), dK = p.right.dimH();
  p.leftSpan_ = nL * dK <= nR * dH;

  Mat gram;
  if (p.leftSpan_) {
    gram.resize(nL * dK, nL * dK);
    for (Index i = 0; i < nL; ++i)
      for (Index i2 = 0; i2 < nL; ++i2) {
        Mat prod = p.left.alpha.basis[i].adjoint() * p.left.alpha.basis[i2];
        gram.block(i * dK, i2 * dK, dK, dK) = p.right.rho(prod, tol);
      }
  } else {
    gram.resize(nR * dH, nR * dH);
    for (Index j = 0; j < nR; ++j)
      for (Index j2 = 0; j2 < nR; ++j2) {
        Mat prod = p.right.alpha.basis[j].adjoint() * p.right.alpha.basis[j2];
        gram.block(j * dH, j2 * dH, dH, dH) = p.left.rho(prod, tol);
      }
  }
  p.E_ = gramQuotient(gram);
  p.space = makeSpace("(" + p.left.H->label + " (x) " + p.right.H->label + ")",
                      p.E_.rows());
  p.buildKets(tol);
  return p;
}

Rtp makeRtpRealized(Module l, Module r, Space space, Mat embedLeft,
                    double tol) {
  if (!sameAlgebra(l.view, r.view.dagger()))
    throw ShapeMismatch("relative tensor product needs dual base views");
  Rtp p;
  p.left = std::move(l);
  p.right = std::move(r);
  p.space = std::move(space);
  p.leftSpan_ = true;
  p.E_ = std::move(embedLeft);
  const Index nL = p.left.legDim(), dK = p.right.dimH();
  if (p.E_.rows() != p.space->dim() || p.E_.cols() != nL * dK)
    throw ShapeMismatch("realized embedding has wrong shape");
  // verify the Gram identity <x_i > w_k, x_i2 > w_k2> = rho(x_i* x_i2)[k,k2]
  double worst = 0.0;
  for (Index i = 0; i < nL; ++i)
    for (Index i2 = 0; i2 < nL; ++i2) {
      Mat prod = p.left.alpha.basis[i].adjoint() * p.left.alpha.basis[i2];
      Mat want = p.right.rho(prod, tol);
      Mat got = p.E_.middleCols(i * dK, dK).adjoint() * p.E_.middleCols(i2 * dK, dK);
      worst = std::max(worst, (want - got).norm());
    }
  if (worst > tol)
    throw InconsistentSystem("realized embedding violates the Gram identity");
  if (matRank(p.E_) != p.space->dim())
    throw InconsistentSystem("realized embedding is not surjective");
  p.buildKets(tol);
  return p;
}

Mat Rtp::ket1(const Mat& xi, double tol) const {
  if (!left.alpha.containsOp(xi, tol))
    throw NotInAlgebra("leg-1 element on " + space->label);
  Vec c = left.alpha.coords(xi);
  Mat out = Mat::Zero(dim(), right.dimH());
  for (Index i = 0; i < left.legDim(); ++i) out += c(i) * ket1b_[i];
  return out;
}

Mat Rtp::ket2(const Mat& eta, double tol) const {
  if (!right.alpha.containsOp(eta, tol))
    throw NotInAlgebra("leg-2 element on " + space->label);
  Vec c = right.alpha.coords(eta);
  Mat out = Mat::Zero(dim(), left.dimH());
  for (Index j = 0; j < right.legDim(); ++j) out += c(j) * ket2b_[j];
  return out;
}

Vec Rtp::embedElem(const Mat& xi, const Vec& zeta, const Mat& eta,
                   double tol) const {
  return ket1(xi, tol) * (eta * zeta);
}

OperatorSpace Rtp::ket1Space() const {
  return spanClosure(right.H, space, ket1b_);
}

OperatorSpace Rtp::ket2Space() const {
  return spanClosure(left.H, space, ket2b_);
}

OperatorSpace Rtp::liftLeft(const OperatorSpace& x) const {
  if (x.rows() != left.dimH())
    throw ShapeMismatch("lifted leg must live on the left factor");
  std::vector<Mat> prods;
  for (const auto& k : ket2b_)
    for (const auto& a : x.basis) prods.push_back(k * a);
  return spanClosure(x.dom, space, prods);
}

OperatorSpace Rtp::liftRight(const OperatorSpace& y) const {
  if (y.rows() != right.dimH())
    throw ShapeMismatch("lifted leg must live on the right factor");
  std::vector<Mat> prods;
  for (const auto& k : ket1b_)
    for (const auto& a : y.basis) prods.push_back(k * a);
  return spanClosure(y.dom, space, prods);
}

Module Rtp::liftLeftModule(const OperatorSpace& x, const BaseView& view,
                           double tol) const {
  return makeModule(space, liftLeft(x), view, tol);
}

Module Rtp::liftRightModule(const OperatorSpace& y, const BaseView& view,
                            double tol) const {
  return makeModule(space, liftRight(y), view, tol);
}

Mat flipUnitary(const Rtp& from, const Rtp& to, double tol) {
  // flip o |xi>_1 = |xi>_2' over the left-leg basis of `from`
  std::vector<Mat> lhs, rhs;
  for (Index i = 0; i < from.left.legDim(); ++i) {
    lhs.push_back(from.ket1Basis()[i]);
    rhs.push_back(to.ket2(from.left.alpha.basis[i], tol));
  }
  Mat w = solveThrough(concatCols(lhs), concatCols(rhs), tol,
                       "flip " + from.space->label);
  if ((w.adjoint() * w - Mat::Identity(from.dim(), from.dim())).norm() > tol ||
      (w * w.adjoint() - Mat::Identity(to.dim(), to.dim())).norm() > tol)
    throw InconsistentSystem("flip is not unitary");
  return w;
}

Mat opLeft(const Rtp& p, const Mat& s, double tol) {
  std::vector<Mat> lhs, rhs;
  for (const auto& k : p.ket2Basis()) {
    lhs.push_back(k);
    rhs.push_back(k * s);
  }
  return solveThrough(concatCols(lhs), concatCols(rhs), tol,
                      "S < Id on " + p.space->label);
}

Mat opRight(const Rtp& p, const Mat& t, double tol) {
  std::vector<Mat> lhs, rhs;
  for (const auto& k : p.ket1Basis()) {
    lhs.push_back(k);
    rhs.push_back(k * t);
  }
  return solveThrough(concatCols(lhs), concatCols(rhs), tol,
                      "Id > T on " + p.space->label);
}

Mat opTensor(const Rtp& p, const Mat& s, const Mat& t, double tol) {
  return opLeft(p, s, tol) * opRight(p, t, tol);
}

Mat rtpFunctor(const Rtp& src, const Rtp& dst, const Mat& s, const Mat& t,
               double tol) {
  if (s.cols() != src.left.dimH() || s.rows() != dst.left.dimH() ||
      t.cols() != src.right.dimH() || t.rows() != dst.right.dimH())
    throw ShapeMismatch("functor operand shapes");
  std::vector<Mat> lhs, rhs;
  for (Index i = 0; i < src.left.legDim(); ++i) {
    Mat sxi = s * src.left.alpha.basis[i];
    if (!dst.left.alpha.containsOp(sxi, tol))
      throw NotInAlgebra("left functor operand is not a semi-morphism");
    lhs.push_back(src.ket1Basis()[i]);
    rhs.push_back(dst.ket1(sxi, tol) * t);
  }
  return solveThrough(concatCols(lhs), concatCols(rhs), tol,
                      "functor " + src.space->label + " -> " + dst.space->label);
}

Mat assocUnitary(const Rtp& lhs, const Rtp& inner, const Rtp& rhs,
                 const Rtp& innerR, double tol) {
  // a o | |xi>_1 e >_1 = |xi>_1 o |e>_1 over the leg bases.
  std::vector<Mat> cols, target;
  for (Index i = 0; i < inner.left.legDim(); ++i)
    for (Index j = 0; j < innerR.left.legDim(); ++j) {
      Mat lifted = inner.ket1Basis()[i] * innerR.left.alpha.basis[j];
      cols.push_back(lhs.ket1(lifted, tol));
      target.push_back(rhs.ket1(inner.left.alpha.basis[i], tol) *
                       innerR.ket1Basis()[j]);
    }
  Mat a = solveThrough(concatCols(cols), concatCols(target), tol,
                       "associativity " + lhs.space->label);
  if ((a.adjoint() * a - Mat::Identity(lhs.dim(), lhs.dim())).norm() > tol ||
      (a * a.adjoint() - Mat::Identity(rhs.dim(), rhs.dim())).norm() > tol)
    throw InconsistentSystem("associativity map is not unitary");
  return a;
}

Mat sigma23Unitary(const Rtp& src, const Rtp& inner1, const Rtp& dst,
                   const Rtp& inner2, double tol) {
  // (zeta < xi) < eta |-> (zeta < eta) < xi
  std::vector<Mat> cols, target;
  for (Index i = 0; i < inner1.right.legDim(); ++i)
    for (Index j = 0; j < src.right.legDim(); ++j) {
      cols.push_back(src.ket2Basis()[j] * inner1.ket2Basis()[i]);
      target.push_back(dst.ket2(inner1.right.alpha.basis[i], tol) *
                       inner2.ket2(src.right.alpha.basis[j], tol));
    }
  Mat w = solveThrough(concatCols(cols), concatCols(target), tol,
                       "leg exchange " + src.space->label);
  if ((w.adjoint() * w - Mat::Identity(src.dim(), src.dim())).norm() > tol ||
      (w * w.adjoint() - Mat::Identity(dst.dim(), dst.dim())).norm() > tol)
    throw InconsistentSystem("leg exchange is not unitary");
  return w;
}

Mat checkUnitary(const Mat& u) {
  Mat d1 = u.adjoint() * u - Mat::Identity(u.cols(), u.cols());
  return d1;
}

}  // namespace qgd
