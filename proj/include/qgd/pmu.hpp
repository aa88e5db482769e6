#pragma once

#include <memory>
#include <optional>

#include "qgd/groupoid.hpp"
#include "qgd/report.hpp"
#include "qgd/rtp.hpp"

namespace qgd {

/// Data shared by the unitary itself and by representation operators: a
/// module pair (K, gamma, deltaHat) and a unitary
///   X : K (x)_{deltaHat, alpha} H  ->  K (x)_{gamma, beta} H.
struct RepTuple {
  Module mGamma;     // (K, gamma) over b
  Module mDeltaHat;  // (K, deltaHat) over b-dagger
  Rtp src;           // rtp(K_deltaHat, H_alpha)
  Rtp rng;           // rtp(K_gamma, H_beta)
  Mat X;
};

/// A pseudo-multiplicative unitary: base, the three module structures on H,
/// the two relative tensor products and the unitary between them.
struct Pmu {
  BasePtr base;
  Space H;
  Module mBetaHat;  // over b-dagger
  Module mAlpha;    // over b
  Module mBeta;     // over b-dagger
  Rtp src;          // H_betaHat (x) H_alpha
  Rtp rng;          // H_alpha (x) H_beta
  Mat V;

  /// Present when built from a groupoid; used by the groupoid-specific
  /// formulas and the representation equivalence.
  struct GroupoidData {
    FiniteGroupoid g;
    HaarSystem haar;
    QuasiInvariantMeasure qim;
    std::vector<std::pair<int, int>> sr;  // index of the source space
    std::vector<std::pair<int, int>> rr;  // index of the range space
  };
  std::shared_ptr<const GroupoidData> groupoid;

  BaseView viewB() const { return BaseView{base, false}; }
  BaseView viewBdag() const { return BaseView{base, true}; }
  RepTuple regularTuple() const;
};

using PmuPtr = std::shared_ptr<const Pmu>;

/// The unitary of a finite groupoid on the pair-index realizations of the
/// two relative tensor products.
PmuPtr groupoidPmu(const FiniteGroupoid& g, const HaarSystem& haar,
                   const std::vector<double>& mu, double tol = kDefaultTol);
PmuPtr groupoidPmu(const FiniteGroupoid& g, double tol = kDefaultTol);

/// Assemble and validate a unitary from raw pieces (used for mutation tests
/// and the generic-realization cross-check). Throws on module-axiom
/// failures only; the unitary axioms are checked by verifyPmu.
PmuPtr assemblePmu(BasePtr base, Space H, OperatorSpace betaHat,
                   OperatorSpace alpha, OperatorSpace beta, Mat V,
                   double tol = kDefaultTol);

/// All triple-product spaces and connecting unitaries needed for the
/// pentagon and for coassociativity, built lazily and cached per unitary.
class PentagonContext {
 public:
  PentagonContext(const Pmu& p, const RepTuple& t, double tol);

  // triple spaces
  Rtp S1, S1p, S2, S2p, Hfive, Hfourlt, HfourltL, Hfourrt, Hfour, S3, S3p;
  Rtp flipRng;  // H_beta (x) H_alpha
  Mat sigmaRng; // rng -> flipRng
  Mat aS1, aS2, aS3;  // associativity unitaries S1->S1p etc.
  Mat lhs() const;    // composite around the long side
  Mat rhs() const;    // composite around the short side
  double pentagonResidual() const;

 private:
  const Pmu& p_;
  const RepTuple& t_;
  double tol_;
  Mat v23p_, idSig_, a2_, x12b_, sig23_, x12c_, x12a_, v23b_;
};

/// Unitarity, the four intertwining relations and the pentagon.
Report verifyPmu(const Pmu& p, double tol = kDefaultTol);

/// The three intertwining relations and the mixed pentagon for an arbitrary
/// representation tuple.
Report verifyRepTuple(const Pmu& p, const RepTuple& t, double tol,
                      const std::string& prefix);

PmuPtr opposite(const Pmu& p, double tol = kDefaultTol);
PmuPtr directSum(const std::vector<PmuPtr>& parts, double tol = kDefaultTol);
PmuPtr tensorPmu(const Pmu& p, const Pmu& q, double tol = kDefaultTol);

/// Unitary intertwiner between two unitaries sharing the same concrete H
/// and K, produced by matching elementary-tensor embeddings; verifies that
/// it intertwines V. Returns the pair (W_src, W_rng) plus the residual of
/// W_rng V_a - V_b W_src.
struct PmuIntertwiner {
  Mat wSrc, wRng;
  double residual;
};
PmuIntertwiner intertwinePmus(const Pmu& a, const Pmu& b,
                              double tol = kDefaultTol);

}  // namespace qgd
