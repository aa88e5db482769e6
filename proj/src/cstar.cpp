#include "qgd/cstar.hpp"

namespace qgd {

BasePtr makeBase(Space K, OperatorSpace B, OperatorSpace Bdag, double tol) {
  if (B.rows() != K->dim() || B.cols() != K->dim() || Bdag.rows() != K->dim() ||
      Bdag.cols() != K->dim())
    throw ShapeMismatch("base algebras must act on the base space");
  if (!isCStarAlgebra(B, tol)) throw BaseAxiomFailed("B is a C*-algebra");
  if (!isCStarAlgebra(Bdag, tol)) throw BaseAxiomFailed("Bdag is a C*-algebra");
  if (!actsNondegenerately(B)) throw BaseAxiomFailed("[B K] = K");
  if (!actsNondegenerately(Bdag)) throw BaseAxiomFailed("[Bdag K] = K");
  for (const auto& b : B.basis)
    for (const auto& d : Bdag.basis)
      if ((b * d - d * b).norm() > tol)
        throw BaseAxiomFailed("B and Bdag commute");
  auto base = std::make_shared<CStarBase>();
  base->K = std::move(K);
  base->B = std::move(B);
  base->Bdag = std::move(Bdag);
  return base;
}

ModuleAxiomResiduals moduleAxiomResiduals(const Space& H,
                                          const OperatorSpace& alpha,
                                          const BaseView& view) {
  ModuleAxiomResiduals r{};
  if (alpha.rows() != H->dim() || alpha.cols() != view.K()->dim())
    throw ShapeMismatch("module leg must map the base space into H");
  r.nondegenerate = actsNondegenerately(alpha) ? 0.0 : 1.0;
  r.stable = equalsResidual(alpha, productSpace(alpha, view.B()));
  r.innerProducts =
      equalsResidual(view.B(), productSpace(adjointSpace(alpha), alpha));
  return r;
}

void Module::buildCaches(double tol) {
  const Index dH = dimH(), dK = dimK(), n = legDim();
  eval_.resize(dH, n * dK);
  for (Index i = 0; i < n; ++i)
    eval_.middleCols(i * dK, dK) = alpha.basis[i];
  evalPinv_ = pinv(eval_);

  rhoBasis_.clear();
  const auto& bdag = view.Bdag();
  for (Index b = 0; b < bdag.dim(); ++b) {
    Mat target(dH, n * dK);
    for (Index i = 0; i < n; ++i)
      target.middleCols(i * dK, dK) = alpha.basis[i] * bdag.basis[b];
    rhoBasis_.push_back(
        solveThrough(eval_, target, tol, "rho on " + H->label));
  }
}

Module makeModuleUnchecked(Space H, OperatorSpace alpha, BaseView view,
                           double tol) {
  Module m;
  m.H = std::move(H);
  m.alpha = std::move(alpha);
  m.view = std::move(view);
  m.buildCaches(tol);
  return m;
}

Module makeModule(Space H, OperatorSpace alpha, BaseView view, double tol) {
  auto r = moduleAxiomResiduals(H, alpha, view);
  if (r.nondegenerate > tol) throw ModuleAxiomFailed("[alpha K] = H");
  if (r.stable > tol) throw ModuleAxiomFailed("[alpha B] = alpha");
  if (r.innerProducts > tol) throw ModuleAxiomFailed("[alpha* alpha] = B");
  return makeModuleUnchecked(std::move(H), std::move(alpha), std::move(view),
                             tol);
}

Mat Module::rho(const Mat& bdag, double tol) const {
  const auto& bd = view.Bdag();
  if (!bd.containsOp(bdag, tol))
    throw NotInAlgebra("rho argument on " + H->label);
  Vec c = bd.coords(bdag);
  Mat out = Mat::Zero(dimH(), dimH());
  for (Index i = 0; i < bd.dim(); ++i) out += c(i) * rhoBasis_[i];
  return out;
}

double multiModuleDefect(const std::vector<const Module*>& mods) {
  double worst = 0.0;
  for (size_t i = 0; i < mods.size(); ++i)
    for (size_t j = 0; j < mods.size(); ++j) {
      if (i == j) continue;
      std::vector<Mat> prods;
      for (const auto& r : mods[i]->rhoBasis())
        for (const auto& x : mods[j]->alpha.basis) prods.push_back(r * x);
      OperatorSpace span = spanClosure(mods[j]->alpha.dom, mods[j]->alpha.cod, prods);
      worst = std::max(worst, equalsResidual(mods[j]->alpha, span));
    }
  return worst;
}

bool isSemiMorphism(const Mat& t, const Module& from, const Module& to,
                    double tol) {
  if (t.rows() != to.dimH() || t.cols() != from.dimH())
    throw ShapeMismatch("semi-morphism shapes");
  for (const auto& x : from.alpha.basis)
    if (!to.alpha.containsOp(t * x, tol)) return false;
  return true;
}

bool isMorphism(const Mat& t, const Module& from, const Module& to,
                double tol) {
  if (!isSemiMorphism(t, from, to, tol)) return false;
  for (const auto& y : to.alpha.basis)
    if (!from.alpha.containsOp(t.adjoint() * y, tol)) return false;
  return true;
}

}  // namespace qgd
