#include "qgd/legs.hpp"

#include <functional>
#include <optional>

namespace qgd {

Mat Functional::eval(const Mat& a) const {
  if (eta.empty()) throw ShapeMismatch("empty functional");
  Mat out = Mat::Zero(eta[0].cols(), etaP[0].cols());
  for (size_t k = 0; k < eta.size(); ++k)
    out += eta[k].adjoint() * a * etaP[k];
  return out;
}

Functional Functional::adjoint() const { return Functional{etaP, eta}; }

Functional rankOneFunctional(Mat eta, Mat etaP) {
  return Functional{{std::move(eta)}, {std::move(etaP)}};
}

OperatorSpace legHat(const Pmu& p, double tol) {
  std::vector<Mat> ops;
  for (const auto& b2 : p.rng.ket2Basis())
    for (const auto& a2 : p.src.ket2Basis())
      ops.push_back(b2.adjoint() * p.V * a2);
  (void)tol;
  return spanClosure(p.H, p.H, ops);
}

OperatorSpace leg(const Pmu& p, double tol) {
  std::vector<Mat> ops;
  for (const auto& a1 : p.rng.ket1Basis())
    for (const auto& h1 : p.src.ket1Basis())
      ops.push_back(a1.adjoint() * p.V * h1);
  (void)tol;
  return spanClosure(p.H, p.H, ops);
}

OperatorSpace cSpace(const Pmu& p, double tol) {
  std::vector<Mat> ops;
  for (const auto& a1 : p.rng.ket1Basis())
    for (const auto& a2 : p.src.ket2Basis())
      ops.push_back(a1.adjoint() * p.V * a2);
  (void)tol;
  return spanClosure(p.H, p.H, ops);
}

namespace {

OperatorSpace alphaAlphaStar(const Pmu& p) {
  return productSpace(p.mAlpha.alpha, adjointSpace(p.mAlpha.alpha));
}

OperatorSpace rhoSpace(const Module& m) {
  return spanClosure(m.H, m.H, m.rhoBasis());
}

}  // namespace

bool isRegular(const Pmu& p, double tol) {
  return equalsSpace(cSpace(p, tol), alphaAlphaStar(p), tol);
}

bool isSemiRegular(const Pmu& p, double tol) {
  return containsSpace(cSpace(p, tol), alphaAlphaStar(p), tol);
}

Mat deltaHat(const Pmu& p, const Mat& y, double tol) {
  for (const auto& r : p.mBeta.rhoBasis())
    if ((y * r - r * y).norm() > tol * std::max(1.0, y.norm()))
      throw NotInCommutant("deltaHat argument vs rho_beta(B)");
  return p.V.adjoint() * opRight(p.rng, y, tol) * p.V;
}

Mat delta(const Pmu& p, const Mat& z, double tol) {
  for (const auto& r : p.mBetaHat.rhoBasis())
    if ((z * r - r * z).norm() > tol * std::max(1.0, z.norm()))
      throw NotInCommutant("delta argument vs rho_betaHat(B)");
  return p.V * opLeft(p.src, z, tol) * p.V.adjoint();
}

FiberProductTester::FiberProductTester(const OperatorSpace& a,
                                       const OperatorSpace& b, const Rtp& rtp)
    : rtp_(rtp) {
  std::vector<Mat> k1b, k2a;
  for (const auto& k : rtp.ket1Basis())
    for (const auto& bb : b.basis) k1b.push_back(k * bb);
  for (const auto& k : rtp.ket2Basis())
    for (const auto& aa : a.basis) k2a.push_back(k * aa);
  t1_ = spanClosure(rtp.right.H, rtp.space, k1b);
  t2_ = spanClosure(rtp.left.H, rtp.space, k2a);
}

double FiberProductTester::residual(const Mat& x) const {
  if (x.rows() != rtp_.dim() || x.cols() != rtp_.dim())
    throw ShapeMismatch("fiber-product membership on the wrong space");
  double worst = 0.0;
  auto check = [&](const Mat& op) {
    for (const auto& k : rtp_.ket1Basis())
      worst =
          std::max(worst, t1_.residual(op * k) / std::max(1.0, (op * k).norm()));
    for (const auto& k : rtp_.ket2Basis())
      worst =
          std::max(worst, t2_.residual(op * k) / std::max(1.0, (op * k).norm()));
  };
  check(x);
  check(x.adjoint());
  return worst;
}

double fiberProductResidual(const Mat& x, const OperatorSpace& a,
                            const OperatorSpace& b, const Rtp& rtp) {
  return FiberProductTester(a, b, rtp).residual(x);
}

bool inFiberProduct(const Mat& x, const OperatorSpace& a,
                    const OperatorSpace& b, const Rtp& rtp, double tol) {
  return fiberProductResidual(x, a, b, rtp) <= tol;
}

Report verifyLegRelations(const Pmu& p, double tol) {
  Report r;
  OperatorSpace ahat = legHat(p, tol);
  OperatorSpace av = leg(p, tol);
  OperatorSpace cv = cSpace(p, tol);
  PmuPtr op = opposite(p, tol);
  OperatorSpace ahatOp = legHat(*op, tol);
  OperatorSpace avOp = leg(*op, tol);
  OperatorSpace cvOp = cSpace(*op, tol);

  OperatorSpace rhoBetaHat = rhoSpace(p.mBetaHat);
  OperatorSpace rhoAlpha = rhoSpace(p.mAlpha);
  OperatorSpace rhoBeta = rhoSpace(p.mBeta);
  const auto& alpha = p.mAlpha.alpha;
  const auto& beta = p.mBeta.alpha;
  const auto& betaHat = p.mBetaHat.alpha;

  auto eq = [&](const std::string& name, const OperatorSpace& x,
                const OperatorSpace& y, const std::string& tag) {
    r.add(name, equalsResidual(x, y), tol, tag);
  };

  eq("legHat(op) = leg*", ahatOp, adjointSpace(av), "legs");
  eq("[legHat legHat] = legHat", productSpace(ahat, ahat), ahat, "legs");
  r.addBool("[legHat H] = H", actsNondegenerately(ahat), "legs");
  r.addBool("[legHat* H] = H", actsNondegenerately(adjointSpace(ahat)), "legs");
  eq("[legHat beta] = beta", productSpace(ahat, beta), beta, "legs");
  eq("[legHat* beta] = beta", productSpace(adjointSpace(ahat), beta), beta,
     "legs");
  eq("[legHat rho_betaHat(B)] = legHat", productSpace(ahat, rhoBetaHat), ahat,
     "legs");
  eq("[rho_betaHat(B) legHat] = legHat", productSpace(rhoBetaHat, ahat), ahat,
     "legs");
  eq("[legHat rho_alpha(Bdag)] = legHat", productSpace(ahat, rhoAlpha), ahat,
     "legs");
  eq("[rho_alpha(Bdag) legHat] = legHat", productSpace(rhoAlpha, ahat), ahat,
     "legs");

  eq("leg(op) = legHat*", avOp, adjointSpace(ahat), "legs");
  eq("[leg leg] = leg", productSpace(av, av), av, "legs");
  r.addBool("[leg H] = H", actsNondegenerately(av), "legs");
  r.addBool("[leg* H] = H", actsNondegenerately(adjointSpace(av)), "legs");
  eq("[leg betaHat] = betaHat", productSpace(av, betaHat), betaHat, "legs");
  eq("[leg* betaHat] = betaHat", productSpace(adjointSpace(av), betaHat),
     betaHat, "legs");
  eq("[leg rho_beta(B)] = leg", productSpace(av, rhoBeta), av, "legs");
  eq("[rho_beta(B) leg] = leg", productSpace(rhoBeta, av), av, "legs");
  eq("[leg rho_alpha(Bdag)] = leg", productSpace(av, rhoAlpha), av, "legs");
  eq("[rho_alpha(Bdag) leg] = leg", productSpace(rhoAlpha, av), av, "legs");

  eq("[C C] = C", productSpace(cv, cv), cv, "regularity");
  eq("C(op) = C*", cvOp, adjointSpace(cv), "regularity");
  eq("[C alpha] = alpha", productSpace(cv, alpha), alpha, "regularity");
  eq("[C rho_beta(B)] = C", productSpace(cv, rhoBeta), cv, "regularity");
  eq("[rho_beta(B) C] = C", productSpace(rhoBeta, cv), cv, "regularity");
  eq("[C rho_betaHat(B)] = C", productSpace(cv, rhoBetaHat), cv, "regularity");
  eq("[rho_betaHat(B) C] = C", productSpace(rhoBetaHat, cv), cv, "regularity");

  bool semiRegular = containsSpace(cv, alphaAlphaStar(p), tol);
  bool regular = semiRegular && equalsSpace(cv, alphaAlphaStar(p), tol);
  r.addBool("semi-regular: C >= [alpha alpha*]", semiRegular, "regularity");
  if (semiRegular)
    r.addBool("C is a C*-algebra", isCStarAlgebra(cv, tol), "regularity");
  if (regular) {
    r.addBool("regular: C = [alpha alpha*]", true, "regularity");
    OperatorSpace a1 = productSpace(adjointSpace(beta), alpha);
    eq("[beta A1] = [alpha A1]", productSpace(beta, a1),
       productSpace(alpha, a1), "regularity");
    OperatorSpace a1op = productSpace(adjointSpace(betaHat), alpha);
    eq("[betaHat A1op] = [alpha A1op]", productSpace(betaHat, a1op),
       productSpace(alpha, a1op), "regularity");
  } else {
    r.addBool("regular: C = [alpha alpha*]", regular, "regularity");
  }
  return r;
}

namespace {

/// Expands one leg of an operator on the product: the unique Y with
/// Y (T_i (x) Id) = (T_i (x) Id) x over the intertwiner family T_i.
/// The pseudo-inverse of the stacked family is computed once.
class LegExpander {
 public:
  explicit LegExpander(std::vector<Mat> functors)
      : functors_(std::move(functors)) {
    Index cols = 0;
    for (const auto& f : functors_) cols += f.cols();
    a_.resize(functors_[0].rows(), cols);
    Index at = 0;
    for (const auto& f : functors_) {
      a_.middleCols(at, f.cols()) = f;
      at += f.cols();
    }
    apinv_ = pinv(a_);
  }

  Mat expand(const Mat& x, double tol, const std::string& what) const {
    Mat b(a_.rows(), a_.cols());
    Index at = 0;
    for (const auto& f : functors_) {
      b.middleCols(at, f.cols()) = f * x;
      at += f.cols();
    }
    Mat y = b * apinv_;
    if ((y * a_ - b).norm() > tol * std::max(1.0, b.norm()))
      throw InconsistentSystem(what);
    return y;
  }

 private:
  std::vector<Mat> functors_;
  Mat a_, apinv_;
};

}  // namespace

Report verifyHopf(const Pmu& p, HopfSide side, double tol,
                  const PentagonContext* ctx) {
  Report r;
  const bool hat = side == HopfSide::Hat;
  const std::string nm = hat ? "legHat" : "leg";
  OperatorSpace a = hat ? legHat(p, tol) : leg(p, tol);

  r.addBool(nm + " is a C*-algebra", isCStarAlgebra(a, tol), "hopf");
  OperatorSpace rho1 = rhoSpace(hat ? p.mBetaHat : p.mBeta);
  OperatorSpace rho2 = rhoSpace(p.mAlpha);
  r.add(nm + ": rho-stability (first leg)",
        containResidual(a, productSpace(rho1, a)), tol, "hopf");
  r.add(nm + ": rho-stability (second leg)",
        containResidual(a, productSpace(rho2, a)), tol, "hopf");

  // commutant preconditions of the comultiplication
  double comm = 0.0;
  const auto& rhoOther = hat ? p.mBeta.rhoBasis() : p.mBetaHat.rhoBasis();
  for (const auto& x : a.basis)
    for (const auto& rb : rhoOther) comm = std::max(comm, (x * rb - rb * x).norm());
  r.add(nm + " commutes with the opposite rho image", comm, tol, "hopf");

  try {
    const Rtp& carrier = hat ? p.src : p.rng;
    FiberProductTester tester(a, a, carrier);
    std::vector<Mat> deltas;
    double fiber = 0.0;
    for (const auto& x : a.basis) {
      Mat d = hat ? deltaHat(p, x, tol) : delta(p, x, tol);
      fiber = std::max(fiber, tester.residual(d));
      deltas.push_back(std::move(d));
    }
    r.add(nm + ": comultiplication lands in the fiber product", fiber, tol,
          "hopf");

    const PentagonContext* c = ctx;
    std::optional<PentagonContext> local;
    RepTuple t = p.regularTuple();
    if (!c) {
      local.emplace(p, t, tol);
      c = &*local;
    }
    Mat idH = Mat::Identity(p.H->dim(), p.H->dim());

    std::vector<Mat> left, right;
    const Rtp &triple = hat ? c->S1 : c->S3, &tripleP = hat ? c->S1p : c->S3p;
    const Mat& aTriple = hat ? c->aS1 : c->aS3;
    for (const auto& k : (hat ? p.rng.ket1Basis() : p.src.ket2Basis())) {
      Mat ti = hat ? Mat(p.V.adjoint() * k) : Mat(p.V * k);
      left.push_back(rtpFunctor(carrier, triple, ti, idH, tol));
      right.push_back(rtpFunctor(carrier, tripleP, idH, ti, tol));
    }
    LegExpander expandL(std::move(left)), expandR(std::move(right));

    double coassoc = 0.0;
    for (const auto& d : deltas) {
      Mat lhs = expandL.expand(d, tol, "comultiplication (x) id");
      Mat rhs = expandR.expand(d, tol, "id (x) comultiplication");
      coassoc =
          std::max(coassoc, opNorm(lhs - aTriple.adjoint() * rhs * aTriple));
    }
    r.add(nm + ": coassociativity", coassoc, tol, "hopf");
  } catch (const Error& e) {
    r.addBool(nm + std::string(": comultiplication (") + e.what() + ")", false,
              "hopf");
  }
  return r;
}

Mat piHat(const Pmu& p, const Functional& omega, double tol) {
  Mat out = Mat::Zero(p.H->dim(), p.H->dim());
  for (size_t k = 0; k < omega.eta.size(); ++k)
    out += p.rng.bra2(omega.eta[k], tol) * p.V * p.src.ket2(omega.etaP[k], tol);
  return out;
}

Mat pi(const Pmu& p, const Functional& upsilon, double tol) {
  Mat out = Mat::Zero(p.H->dim(), p.H->dim());
  for (size_t k = 0; k < upsilon.eta.size(); ++k)
    out +=
        p.rng.bra1(upsilon.eta[k], tol) * p.V * p.src.ket1(upsilon.etaP[k], tol);
  return out;
}

Mat convolveEval(const Pmu& p, const Functional& omega,
                 const Functional& omegaP, const Mat& a, double tol) {
  Mat d = delta(p, a, tol);
  Mat out = Mat::Zero(p.base->K->dim(), p.base->K->dim());
  for (size_t m = 0; m < omega.eta.size(); ++m)
    for (size_t n = 0; n < omegaP.eta.size(); ++n) {
      Mat theta = p.rng.ket2(omegaP.eta[n], tol) * omega.eta[m];
      Mat thetaP = p.rng.ket1(omega.etaP[m], tol) * omegaP.etaP[n];
      out += theta.adjoint() * d * thetaP;
    }
  return out;
}

Functional functionalFromEval(
    const std::function<Mat(const Mat&)>& evalMap, const OperatorSpace& etaSide,
    const OperatorSpace& etaPSide, const std::vector<Mat>& domainSpan,
    double tol) {
  const Index nE = etaSide.dim(), nP = etaPSide.dim();
  const Index dK = etaSide.cols();
  Mat lhs(static_cast<Index>(domainSpan.size()) * dK * dK, nE * nP);
  Vec rhs(static_cast<Index>(domainSpan.size()) * dK * dK);
  for (size_t s = 0; s < domainSpan.size(); ++s) {
    rhs.segment(static_cast<Index>(s) * dK * dK, dK * dK) =
        vecOf(evalMap(domainSpan[s]));
    for (Index j = 0; j < nE; ++j)
      for (Index i = 0; i < nP; ++i) {
        Mat v = etaSide.basis[j].adjoint() * domainSpan[s] * etaPSide.basis[i];
        lhs.col(j * nP + i).segment(static_cast<Index>(s) * dK * dK, dK * dK) =
            vecOf(v);
      }
  }
  Vec c = pinv(lhs) * rhs;
  double res = (lhs * c - rhs).norm();
  if (res > tol * std::max(1.0, rhs.norm()))
    throw InconsistentSystem("functional is not representable by tuples");
  Functional f;
  for (Index j = 0; j < nE; ++j)
    for (Index i = 0; i < nP; ++i) {
      f.eta.push_back(etaSide.basis[j]);
      f.etaP.push_back(c(j * nP + i) * etaPSide.basis[i]);
    }
  return f;
}

Functional convolve(const Pmu& p, const Functional& omega,
                    const Functional& omegaP, double tol) {
  OperatorSpace dom = commutant(rhoSpace(p.mBetaHat));
  std::vector<Mat> span = dom.basis;
  return functionalFromEval(
      [&](const Mat& a) { return convolveEval(p, omega, omegaP, a, tol); },
      p.mBeta.alpha, p.mAlpha.alpha, span, tol);
}

PairingValue pairing(const Pmu& p, const Functional& omega,
                     const Functional& upsilon, double tol) {
  Mat v1 = omega.eval(pi(p, upsilon, tol));
  Mat v2 = upsilon.eval(piHat(p, omega, tol));
  return PairingValue{v1, (v1 - v2).norm()};
}

Functional sliceLeft(const Rtp& rtp, const Functional& phi, double tol) {
  Functional out;
  for (size_t k = 0; k < phi.eta.size(); ++k) {
    out.eta.push_back(rtp.ket1(phi.eta[k], tol));
    out.etaP.push_back(rtp.ket1(phi.etaP[k], tol));
  }
  return out;
}

Functional sliceRight(const Rtp& rtp, const Functional& psi, double tol) {
  Functional out;
  for (size_t k = 0; k < psi.eta.size(); ++k) {
    out.eta.push_back(rtp.ket2(psi.eta[k], tol));
    out.etaP.push_back(rtp.ket2(psi.etaP[k], tol));
  }
  return out;
}

Mat multOp(const Pmu& p, const std::vector<Cplx>& f) {
  if (!p.groupoid) throw NotGroupoidPMU("multiplication operator");
  const auto& g = p.groupoid->g;
  if (static_cast<int>(f.size()) != g.nArrows())
    throw ShapeMismatch("function on arrows has wrong size");
  Mat m = Mat::Zero(g.nArrows(), g.nArrows());
  for (int x = 0; x < g.nArrows(); ++x) m(x, x) = f[x];
  return m;
}

Mat convOp(const Pmu& p, const std::vector<Cplx>& f) {
  if (!p.groupoid) throw NotGroupoidPMU("convolution operator");
  const auto& g = p.groupoid->g;
  const auto& w = p.groupoid->haar;
  if (static_cast<int>(f.size()) != g.nArrows())
    throw ShapeMismatch("function on arrows has wrong size");
  Mat m = Mat::Zero(g.nArrows(), g.nArrows());
  for (int y = 0; y < g.nArrows(); ++y)
    for (int z = 0; z < g.nArrows(); ++z) {
      if (g.src[y] != g.src[z]) continue;
      int x = g.comp[y][g.inv[z]];
      m(y, z) = f[x] * std::sqrt(w(x) * w(g.inv[x]));
    }
  return m;
}

}  // namespace qgd
