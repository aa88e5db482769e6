#pragma once

#include <memory>

#include "qgd/opspace.hpp"

namespace qgd {

/// A Hilbert space with two commuting nondegenerate C*-algebras on it.
struct CStarBase {
  Space K;
  OperatorSpace B;
  OperatorSpace Bdag;
};

using BasePtr = std::shared_ptr<const CStarBase>;

/// Validates nondegeneracy, algebra closure and commutation; names the
/// failing axiom.
BasePtr makeBase(Space K, OperatorSpace B, OperatorSpace Bdag,
                 double tol = kDefaultTol);

/// A base or its dagger (the same triple read with the two algebras swapped).
struct BaseView {
  BasePtr base;
  bool dag = false;
  const OperatorSpace& B() const { return dag ? base->Bdag : base->B; }
  const OperatorSpace& Bdag() const { return dag ? base->B : base->Bdag; }
  const Space& K() const { return base->K; }
  BaseView dagger() const { return BaseView{base, !dag}; }
};

inline bool sameAlgebra(const BaseView& a, const BaseView& b) {
  return a.base == b.base && a.dag == b.dag;
}

/// A module (H, alpha) over a base view, with the induced representation of
/// the partner algebra and the cached evaluation map alpha (x) K -> H.
class Module {
 public:
  Module() = default;
  Space H;
  OperatorSpace alpha;  // subspace of L(K, H)
  BaseView view;

  Index dimH() const { return H->dim(); }
  Index dimK() const { return view.K()->dim(); }
  Index legDim() const { return alpha.dim(); }

  /// Columns x_i zeta_k, k fastest.
  const Mat& evalMat() const { return eval_; }
  const Mat& evalPinv() const { return evalPinv_; }

  /// rho(b)(x zeta) = x b zeta for b in the partner algebra Bdag.
  Mat rho(const Mat& bdag, double tol = kDefaultTol) const;
  const std::vector<Mat>& rhoBasis() const { return rhoBasis_; }

  friend Module makeModule(Space H, OperatorSpace alpha, BaseView view,
                           double tol);
  /// Same construction but without the three axiom checks (used where the
  /// axioms are themselves the property under test).
  friend Module makeModuleUnchecked(Space H, OperatorSpace alpha,
                                    BaseView view, double tol);

 private:
  Mat eval_, evalPinv_;
  std::vector<Mat> rhoBasis_;  // rho on the Bdag basis
  void buildCaches(double tol);
};

Module makeModule(Space H, OperatorSpace alpha, BaseView view,
                  double tol = kDefaultTol);
Module makeModuleUnchecked(Space H, OperatorSpace alpha, BaseView view,
                           double tol = kDefaultTol);

/// Residuals of the three module axioms ([alpha K] = H, [alpha B] = alpha,
/// [alpha* alpha] = B); all <= tol iff the module is valid.
struct ModuleAxiomResiduals {
  double nondegenerate;  // 0 or 1 (rank test)
  double stable;
  double innerProducts;
};
ModuleAxiomResiduals moduleAxiomResiduals(const Space& H,
                                          const OperatorSpace& alpha,
                                          const BaseView& view);

/// Compatibility of several module structures on one space:
/// [rho_{alpha_i}(Bdag_i) alpha_j] = alpha_j for i != j.
double multiModuleDefect(const std::vector<const Module*>& mods);

bool isSemiMorphism(const Mat& t, const Module& from, const Module& to,
                    double tol = kDefaultTol);
bool isMorphism(const Mat& t, const Module& from, const Module& to,
                double tol = kDefaultTol);

}  // namespace qgd
