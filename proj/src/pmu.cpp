#include "qgd/pmu.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <map>

namespace qgd {

namespace {

OperatorSpace matrixUnits(const Space& dom, const Space& cod,
                          const std::vector<std::pair<Index, Index>>& at) {
  std::vector<Mat> basis;
  for (auto [r, c] : at) {
    Mat m = Mat::Zero(cod->dim(), dom->dim());
    m(r, c) = 1.0;
    basis.push_back(std::move(m));
  }
  return fromOrthonormal(dom, cod, std::move(basis));
}

}  // namespace

RepTuple Pmu::regularTuple() const { return RepTuple{mAlpha, mBetaHat, src, rng, V}; }

PmuPtr groupoidPmu(const FiniteGroupoid& g, const HaarSystem& haar,
                   const std::vector<double>& mu, double tol) {
  if (!verifyLeftInvariance(g, haar, 1e-9))
    throw InvalidGroupoid("haar system is not left invariant");
  auto qim = radonNikodym(g, haar, mu);

  auto p = std::make_shared<Pmu>();
  const int nU = g.nUnits(), nA = g.nArrows();

  Space K = makeSpace("K", [&] {
    std::vector<std::string> names;
    for (const auto& u : g.unit_names) names.push_back(u);
    return names;
  }());
  std::vector<std::pair<Index, Index>> diag;
  for (int u = 0; u < nU; ++u) diag.emplace_back(u, u);
  OperatorSpace B = matrixUnits(K, K, diag);
  p->base = makeBase(K, B, B, tol);
  p->H = makeSpace("H", [&] {
    std::vector<std::string> names;
    for (const auto& a : g.arrow_names) names.push_back(a);
    return names;
  }());

  std::vector<std::pair<Index, Index>> atR, atS;
  for (int x = 0; x < nA; ++x) {
    atR.emplace_back(x, g.tgt[x]);
    atS.emplace_back(x, g.src[x]);
  }
  OperatorSpace alpha = matrixUnits(K, p->H, atR);
  OperatorSpace betaHat = matrixUnits(K, p->H, atS);
  p->mAlpha = makeModule(p->H, alpha, p->viewB(), tol);
  p->mBeta = makeModule(p->H, alpha, p->viewBdag(), tol);
  p->mBetaHat = makeModule(p->H, betaHat, p->viewBdag(), tol);
  if (multiModuleDefect({&p->mBetaHat, &p->mAlpha, &p->mBeta}) > tol)
    throw ModuleAxiomFailed("module structures on H are not compatible");

  auto gd = std::make_shared<Pmu::GroupoidData>();
  gd->g = g;
  gd->haar = haar;
  gd->qim = qim;
  gd->sr = g.pairsSR();
  gd->rr = g.pairsRR();

  // Pair-index realizations: the embedding of x_a > e_b is the incidence
  // vector of the composability condition.
  auto realize = [&](const std::vector<std::pair<int, int>>& pairs,
                     const Module& left, const Module& right,
                     const std::string& label) {
    std::vector<std::string> names;
    names.reserve(pairs.size());
    for (auto [a, b] : pairs)
      names.push_back("(" + g.arrow_names[a] + "," + g.arrow_names[b] + ")");
    Space sp = makeSpace(label, names);
    Mat E = Mat::Zero(static_cast<Index>(pairs.size()),
                      static_cast<Index>(nA) * nA);
    for (Index idx = 0; idx < static_cast<Index>(pairs.size()); ++idx) {
      auto [a, b] = pairs[static_cast<size_t>(idx)];
      E(idx, static_cast<Index>(a) * nA + b) = 1.0;
    }
    return makeRtpRealized(left, right, sp, E, tol);
  };
  p->src = realize(gd->sr, p->mBetaHat, p->mAlpha, "H(s*r)H");
  p->rng = realize(gd->rr, p->mAlpha, p->mBeta, "H(r*r)H");

  // (V w)(x, y) = w(x, x^-1 y); in the orthonormal gauge the entries are
  // sqrt(w(ab)/w(b)), which left invariance makes 1.
  std::map<std::pair<int, int>, Index> srIdx, rrIdx;
  for (size_t i = 0; i < gd->sr.size(); ++i) srIdx[gd->sr[i]] = static_cast<Index>(i);
  for (size_t i = 0; i < gd->rr.size(); ++i) rrIdx[gd->rr[i]] = static_cast<Index>(i);
  Mat V = Mat::Zero(static_cast<Index>(gd->rr.size()),
                    static_cast<Index>(gd->sr.size()));
  for (auto& [pr, col] : srIdx) {
    auto [a, b] = pr;
    int ab = g.comp[a][b];
    V(rrIdx.at({a, ab}), col) = std::sqrt(haar(ab) / haar(b));
  }
  p->V = std::move(V);
  p->groupoid = gd;
  return p;
}

PmuPtr groupoidPmu(const FiniteGroupoid& g, double tol) {
  return groupoidPmu(g, countingHaar(g), std::vector<double>(g.nUnits(), 1.0),
                     tol);
}

PmuPtr assemblePmu(BasePtr base, Space H, OperatorSpace betaHat,
                   OperatorSpace alpha, OperatorSpace beta, Mat V,
                   double tol) {
  auto p = std::make_shared<Pmu>();
  p->base = std::move(base);
  p->H = std::move(H);
  p->mAlpha = makeModule(p->H, std::move(alpha), p->viewB(), tol);
  p->mBeta = makeModule(p->H, std::move(beta), p->viewBdag(), tol);
  p->mBetaHat = makeModule(p->H, std::move(betaHat), p->viewBdag(), tol);
  if (multiModuleDefect({&p->mBetaHat, &p->mAlpha, &p->mBeta}) > tol)
    throw ModuleAxiomFailed("module structures on H are not compatible");
  p->src = makeRtp(p->mBetaHat, p->mAlpha, tol);
  p->rng = makeRtp(p->mAlpha, p->mBeta, tol);
  if (V.rows() != p->rng.dim() || V.cols() != p->src.dim())
    throw ShapeMismatch("V must map the source product to the range product");
  p->V = std::move(V);
  return p;
}

PentagonContext::PentagonContext(const Pmu& p, const RepTuple& t, double tol)
    : p_(p), t_(t), tol_(tol) {
  const auto& betaHat = p.mBetaHat.alpha;
  const auto& alpha = p.mAlpha.alpha;
  const auto& beta = p.mBeta.alpha;
  const auto& gamma = t.mGamma.alpha;
  const auto& deltaHat = t.mDeltaHat.alpha;
  BaseView vb = p.viewB(), vd = p.viewBdag();

  flipRng = makeRtp(p.mBeta, p.mAlpha, tol);
  sigmaRng = flipUnitary(p.rng, flipRng, tol);

  S1 = makeRtp(t.src.liftRightModule(betaHat, vd, tol), p.mAlpha, tol);
  S1p = makeRtp(t.mDeltaHat, p.src.liftLeftModule(alpha, vb, tol), tol);
  S2 = makeRtp(t.rng.liftRightModule(betaHat, vd, tol), p.mAlpha, tol);
  S2p = makeRtp(t.mGamma, p.src.liftLeftModule(beta, vd, tol), tol);
  Hfive = makeRtp(t.mDeltaHat, p.rng.liftRightModule(alpha, vb, tol), tol);
  Hfourlt = makeRtp(t.mDeltaHat, flipRng.liftLeftModule(alpha, vb, tol), tol);
  HfourltL = makeRtp(t.src.liftRightModule(beta, vd, tol), p.mAlpha, tol);
  Hfourrt = makeRtp(t.rng.liftLeftModule(deltaHat, vd, tol), p.mAlpha, tol);
  Hfour = makeRtp(t.src.liftLeftModule(gamma, vb, tol), p.mBeta, tol);
  S3 = makeRtp(t.rng.liftRightModule(alpha, vb, tol), p.mBeta, tol);
  S3p = makeRtp(t.mGamma, p.rng.liftLeftModule(beta, vd, tol), tol);

  const Index dK = t.mGamma.dimH(), dH = p.H->dim();
  Mat idK = Mat::Identity(dK, dK), idH = Mat::Identity(dH, dH);

  aS1 = assocUnitary(S1, t.src, S1p, p.src, tol);
  v23p_ = rtpFunctor(S1p, Hfive, idK, p.V, tol);
  idSig_ = rtpFunctor(Hfive, Hfourlt, idK, sigmaRng, tol);
  a2_ = assocUnitary(HfourltL, t.src, Hfourlt, flipRng, tol);
  x12b_ = rtpFunctor(HfourltL, Hfourrt, t.X, idH, tol);
  sig23_ = sigma23Unitary(Hfourrt, t.rng, Hfour, t.src, tol);
  x12c_ = rtpFunctor(Hfour, S3, t.X, idH, tol);

  x12a_ = rtpFunctor(S1, S2, t.X, idH, tol);
  aS2 = assocUnitary(S2, t.rng, S2p, p.src, tol);
  v23b_ = rtpFunctor(S2p, S3p, idK, p.V, tol);
  aS3 = assocUnitary(S3, t.rng, S3p, p.rng, tol);
}

Mat PentagonContext::lhs() const {
  return x12c_ * sig23_ * x12b_ * a2_.adjoint() * idSig_ * v23p_ * aS1;
}

Mat PentagonContext::rhs() const {
  return aS3.adjoint() * v23b_ * aS2 * x12a_;
}

double PentagonContext::pentagonResidual() const {
  return opNorm(lhs() - rhs());
}

namespace {

double spaceMapResidual(const Mat& u, const OperatorSpace& from,
                        const OperatorSpace& to) {
  std::vector<Mat> mapped;
  for (const auto& b : from.basis) mapped.push_back(u * b);
  OperatorSpace img = spanClosure(from.dom, to.cod, mapped);
  return equalsResidual(to, img);
}

}  // namespace

Report verifyRepTuple(const Pmu& p, const RepTuple& t, double tol,
                      const std::string& prefix) {
  Report r;
  const Mat& x = t.X;
  r.add(prefix + "unitary: X*X = 1",
        (x.adjoint() * x - Mat::Identity(x.cols(), x.cols())).norm(), tol,
        "unitarity");
  r.add(prefix + "unitary: XX* = 1",
        (x * x.adjoint() - Mat::Identity(x.rows(), x.rows())).norm(), tol,
        "unitarity");

  const auto& betaHat = p.mBetaHat.alpha;
  const auto& alpha = p.mAlpha.alpha;
  const auto& beta = p.mBeta.alpha;
  const auto& gamma = t.mGamma.alpha;
  const auto& deltaHat = t.mDeltaHat.alpha;

  r.add(prefix + "intertwine: X(gamma < alpha) = gamma > alpha",
        spaceMapResidual(x, t.src.liftLeft(gamma), t.rng.liftRight(alpha)),
        tol, "intertwine");
  r.add(prefix + "intertwine: X(deltaHat > beta) = deltaHat < beta",
        spaceMapResidual(x, t.src.liftRight(beta), t.rng.liftLeft(deltaHat)),
        tol, "intertwine");
  r.add(prefix + "intertwine: X(deltaHat > betaHat) = gamma > betaHat",
        spaceMapResidual(x, t.src.liftRight(betaHat), t.rng.liftRight(betaHat)),
        tol, "intertwine");

  try {
    PentagonContext ctx(p, t, tol);
    r.add(prefix + "pentagon", ctx.pentagonResidual(), tol, "pentagon");
  } catch (const Error& e) {
    r.addBool(prefix + std::string("pentagon (") + e.what() + ")", false,
              "pentagon");
  }
  return r;
}

Report verifyPmu(const Pmu& p, double tol) {
  RepTuple t = p.regularTuple();
  Report r = verifyRepTuple(p, t, tol, "");
  const auto& beta = p.mBeta.alpha;
  r.add("intertwine: V(beta < alpha) = beta < beta",
        spaceMapResidual(p.V, p.src.liftLeft(beta), p.rng.liftLeft(beta)), tol,
        "intertwine");
  return r;
}

PmuPtr opposite(const Pmu& p, double tol) {
  auto q = std::make_shared<Pmu>();
  q->base = p.base;
  q->H = p.H;
  q->mBetaHat = p.mBeta;
  q->mAlpha = p.mAlpha;
  q->mBeta = p.mBetaHat;
  q->src = makeRtp(q->mBetaHat, q->mAlpha, tol);
  q->rng = makeRtp(q->mAlpha, q->mBeta, tol);
  // V^op = Sigma V* Sigma through the two flips
  Mat flipIn = flipUnitary(q->src, p.rng, tol);   // H_beta (x) H_alpha -> rng
  Mat flipOut = flipUnitary(p.src, q->rng, tol);  // src -> H_alpha (x) H_betaHat
  q->V = flipOut * p.V.adjoint() * flipIn;
  return q;
}

PmuPtr directSum(const std::vector<PmuPtr>& parts, double tol) {
  if (parts.empty()) throw ShapeMismatch("direct sum of zero unitaries");
  if (parts.size() == 1) return parts[0];

  Index dK = 0, dH = 0;
  for (const auto& p : parts) {
    dK += p->base->K->dim();
    dH += p->H->dim();
  }
  Space K = makeSpace("K(+)", dK);
  Space H = makeSpace("H(+)", dH);

  auto embed = [](const Mat& m, Index rowOff, Index colOff, Index rows,
                  Index cols) {
    Mat out = Mat::Zero(rows, cols);
    out.block(rowOff, colOff, m.rows(), m.cols()) = m;
    return out;
  };

  std::vector<Mat> bB, bBdag, bBetaHat, bAlpha, bBeta;
  Index kOff = 0, hOff = 0;
  for (const auto& p : parts) {
    for (const auto& m : p->base->B.basis)
      bB.push_back(embed(m, kOff, kOff, dK, dK));
    for (const auto& m : p->base->Bdag.basis)
      bBdag.push_back(embed(m, kOff, kOff, dK, dK));
    for (const auto& m : p->mBetaHat.alpha.basis)
      bBetaHat.push_back(embed(m, hOff, kOff, dH, dK));
    for (const auto& m : p->mAlpha.alpha.basis)
      bAlpha.push_back(embed(m, hOff, kOff, dH, dK));
    for (const auto& m : p->mBeta.alpha.basis)
      bBeta.push_back(embed(m, hOff, kOff, dH, dK));
    kOff += p->base->K->dim();
    hOff += p->H->dim();
  }

  auto base = makeBase(K, fromOrthonormal(K, K, bB),
                       fromOrthonormal(K, K, bBdag), tol);
  auto q = std::make_shared<Pmu>();
  q->base = base;
  q->H = H;
  q->mBetaHat = makeModule(H, fromOrthonormal(K, H, bBetaHat), q->viewBdag(), tol);
  q->mAlpha = makeModule(H, fromOrthonormal(K, H, bAlpha), q->viewB(), tol);
  q->mBeta = makeModule(H, fromOrthonormal(K, H, bBeta), q->viewBdag(), tol);
  q->src = makeRtp(q->mBetaHat, q->mAlpha, tol);
  q->rng = makeRtp(q->mAlpha, q->mBeta, tol);

  // canonical isometries W_i : src_i -> src via embedding of leg operators
  auto blockIsometry = [&](const Rtp& whole, const Rtp& piece, Index kOff2,
                           Index hOff2, Index ph) {
    std::vector<Mat> lhsBlocks, rhsBlocks;
    Mat iotaH = Mat::Zero(dH, ph);
    iotaH.block(hOff2, 0, ph, ph) = Mat::Identity(ph, ph);
    for (Index i = 0; i < piece.left.legDim(); ++i) {
      Mat xiBig = embed(piece.left.alpha.basis[i], hOff2, kOff2, dH, dK);
      lhsBlocks.push_back(piece.ket1Basis()[i]);
      rhsBlocks.push_back(whole.ket1(xiBig, tol) * iotaH);
    }
    Index total = 0;
    for (auto& b : lhsBlocks) total += b.cols();
    Mat A(piece.dim(), total), Bm(whole.dim(), total);
    Index at = 0;
    for (size_t i = 0; i < lhsBlocks.size(); ++i) {
      A.middleCols(at, lhsBlocks[i].cols()) = lhsBlocks[i];
      Bm.middleCols(at, rhsBlocks[i].cols()) = rhsBlocks[i];
      at += lhsBlocks[i].cols();
    }
    Mat w = solveThrough(A, Bm, tol, "direct-sum block isometry");
    if ((w.adjoint() * w - Mat::Identity(piece.dim(), piece.dim())).norm() > tol)
      throw InconsistentSystem("direct-sum block map is not isometric");
    return w;
  };

  Mat V = Mat::Zero(q->rng.dim(), q->src.dim());
  kOff = 0;
  hOff = 0;
  for (const auto& p : parts) {
    Mat wSrc = blockIsometry(q->src, p->src, kOff, hOff, p->H->dim());
    Mat wRng = blockIsometry(q->rng, p->rng, kOff, hOff, p->H->dim());
    V += wRng * p->V * wSrc.adjoint();
    kOff += p->base->K->dim();
    hOff += p->H->dim();
  }
  q->V = std::move(V);
  if ((q->V.adjoint() * q->V - Mat::Identity(q->src.dim(), q->src.dim()))
          .norm() > tol)
    throw InconsistentSystem("direct-sum unitary is not unitary");
  return q;
}

PmuPtr tensorPmu(const Pmu& p, const Pmu& q, double tol) {
  const Index kp = p.base->K->dim(), kq = q.base->K->dim();
  const Index hp = p.H->dim(), hq = q.H->dim();
  Space K = makeSpace("K(x)", kp * kq);
  Space H = makeSpace("H(x)", hp * hq);

  auto kronSpan = [](Space dom, Space cod, const OperatorSpace& a,
                     const OperatorSpace& b) {
    std::vector<Mat> ops;
    for (const auto& x : a.basis)
      for (const auto& y : b.basis)
        ops.push_back(Eigen::kroneckerProduct(x, y).eval());
    return fromOrthonormal(std::move(dom), std::move(cod), std::move(ops));
  };

  auto base = makeBase(K, kronSpan(K, K, p.base->B, q.base->B),
                       kronSpan(K, K, p.base->Bdag, q.base->Bdag), tol);
  auto out = std::make_shared<Pmu>();
  out->base = base;
  out->H = H;
  out->mBetaHat = makeModule(
      H, kronSpan(K, H, p.mBetaHat.alpha, q.mBetaHat.alpha), out->viewBdag(), tol);
  out->mAlpha = makeModule(H, kronSpan(K, H, p.mAlpha.alpha, q.mAlpha.alpha),
                           out->viewB(), tol);
  out->mBeta = makeModule(H, kronSpan(K, H, p.mBeta.alpha, q.mBeta.alpha),
                          out->viewBdag(), tol);
  out->src = makeRtp(out->mBetaHat, out->mAlpha, tol);
  out->rng = makeRtp(out->mAlpha, out->mBeta, tol);

  // W : piece1 (x) piece2 -> whole by matching kets on elementary tensors
  auto kronIsometry = [&](const Rtp& whole, const Rtp& a, const Rtp& b) {
    std::vector<Mat> lhsBlocks, rhsBlocks;
    for (Index i = 0; i < a.left.legDim(); ++i)
      for (Index j = 0; j < b.left.legDim(); ++j) {
        Mat big = Eigen::kroneckerProduct(a.left.alpha.basis[i],
                                          b.left.alpha.basis[j])
                      .eval();
        lhsBlocks.push_back(
            Eigen::kroneckerProduct(a.ket1Basis()[i], b.ket1Basis()[j]).eval());
        rhsBlocks.push_back(whole.ket1(big, tol));
      }
    Index total = 0;
    for (auto& m : lhsBlocks) total += m.cols();
    Mat A(lhsBlocks[0].rows(), total), Bm(whole.dim(), total);
    Index at = 0;
    for (size_t i = 0; i < lhsBlocks.size(); ++i) {
      A.middleCols(at, lhsBlocks[i].cols()) = lhsBlocks[i];
      Bm.middleCols(at, rhsBlocks[i].cols()) = rhsBlocks[i];
      at += lhsBlocks[i].cols();
    }
    Mat w = solveThrough(A, Bm, tol, "tensor-product isometry");
    if ((w * w.adjoint() - Mat::Identity(whole.dim(), whole.dim())).norm() >
            tol ||
        (w.adjoint() * w -
         Mat::Identity(a.dim() * b.dim(), a.dim() * b.dim()))
                .norm() > tol)
      throw InconsistentSystem("tensor-product map is not unitary");
    return w;
  };

  Mat wSrc = kronIsometry(out->src, p.src, q.src);
  Mat wRng = kronIsometry(out->rng, p.rng, q.rng);
  out->V = wRng * Eigen::kroneckerProduct(p.V, q.V).eval() * wSrc.adjoint();
  return out;
}

PmuIntertwiner intertwinePmus(const Pmu& a, const Pmu& b, double tol) {
  if (a.H->dim() != b.H->dim() || a.base->K->dim() != b.base->K->dim())
    throw ShapeMismatch("intertwiner between unitaries on different spaces");
  auto legMap = [&](const Rtp& from, const Rtp& to) {
    std::vector<Mat> lhsB, rhsB;
    for (Index i = 0; i < from.left.legDim(); ++i) {
      lhsB.push_back(from.ket1Basis()[i]);
      rhsB.push_back(to.ket1(from.left.alpha.basis[i], tol));
    }
    Index total = 0;
    for (auto& m : lhsB) total += m.cols();
    Mat A(from.dim(), total), Bm(to.dim(), total);
    Index at = 0;
    for (size_t i = 0; i < lhsB.size(); ++i) {
      A.middleCols(at, lhsB[i].cols()) = lhsB[i];
      Bm.middleCols(at, rhsB[i].cols()) = rhsB[i];
      at += lhsB[i].cols();
    }
    Mat w = solveThrough(A, Bm, tol, "product-space intertwiner");
    if ((w.adjoint() * w - Mat::Identity(from.dim(), from.dim())).norm() > tol ||
        (w * w.adjoint() - Mat::Identity(to.dim(), to.dim())).norm() > tol)
      throw InconsistentSystem("product-space intertwiner is not unitary");
    return w;
  };
  PmuIntertwiner out;
  out.wSrc = legMap(a.src, b.src);
  out.wRng = legMap(a.rng, b.rng);
  out.residual = (out.wRng * a.V - b.V * out.wSrc).norm();
  return out;
}

}  // namespace qgd
