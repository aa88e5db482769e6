#pragma once

#include <functional>

#include "qgd/pmu.hpp"

namespace qgd {

/// omega_{eta, eta'} : a |-> sum_k eta_k^* a eta'_k, kept extensionally as
/// the two finite tuples.
struct Functional {
  std::vector<Mat> eta, etaP;  // operators K_base -> H (or -> K)
  Mat eval(const Mat& a) const;
  Functional adjoint() const;  // omega^*(a) = omega(a^*)^*
};

Functional rankOneFunctional(Mat eta, Mat etaP);

/// Legs and the regularity space.
OperatorSpace legHat(const Pmu& p, double tol = kDefaultTol);   // [<beta|_2 V |alpha>_2]
OperatorSpace leg(const Pmu& p, double tol = kDefaultTol);      // [<alpha|_1 V |betaHat>_1]
OperatorSpace cSpace(const Pmu& p, double tol = kDefaultTol);   // [<alpha|_1 V |alpha>_2]

bool isRegular(const Pmu& p, double tol = kDefaultTol);
bool isSemiRegular(const Pmu& p, double tol = kDefaultTol);

/// Comultiplications. Arguments must commute with the indicated rho image.
Mat deltaHat(const Pmu& p, const Mat& y, double tol = kDefaultTol);
Mat delta(const Pmu& p, const Mat& z, double tol = kDefaultTol);

/// Fiber-product membership of x acting on the product `rtp`: the four
/// containments against [|beta>_1 B] and [|gamma>_2 A].
bool inFiberProduct(const Mat& x, const OperatorSpace& a,
                    const OperatorSpace& b, const Rtp& rtp,
                    double tol = kDefaultTol);
double fiberProductResidual(const Mat& x, const OperatorSpace& a,
                            const OperatorSpace& b, const Rtp& rtp);

/// Prebuilt target spans for repeated fiber-product membership tests.
class FiberProductTester {
 public:
  FiberProductTester(const OperatorSpace& a, const OperatorSpace& b,
                     const Rtp& rtp);
  double residual(const Mat& x) const;

 private:
  const Rtp& rtp_;
  OperatorSpace t1_, t2_;
};

enum class HopfSide { Hat, Plain };

/// The full relation suite of the two legs and the regularity space.
Report verifyLegRelations(const Pmu& p, double tol = kDefaultTol);

/// C*-algebra property, fiber-product membership of the comultiplication
/// and coassociativity through the triple-product identifications. A
/// prebuilt PentagonContext for the regular tuple may be supplied to share
/// the triple products.
Report verifyHopf(const Pmu& p, HopfSide side, double tol = kDefaultTol,
                  const PentagonContext* ctx = nullptr);

/// Fourier images and the duality pairing.
Mat piHat(const Pmu& p, const Functional& omega, double tol = kDefaultTol);
Mat pi(const Pmu& p, const Functional& upsilon, double tol = kDefaultTol);

/// omega (x) omega' evaluated through the comultiplication; also expanded
/// back into a tuple functional over (beta, alpha) so it can be fed to
/// piHat again.
Mat convolveEval(const Pmu& p, const Functional& omega, const Functional& omegaP,
                 const Mat& a, double tol = kDefaultTol);
Functional convolve(const Pmu& p, const Functional& omega,
                    const Functional& omegaP, double tol = kDefaultTol);

/// (piHat(omega) | pi(upsilon)) = omega(pi(upsilon)) = upsilon(piHat(omega));
/// both routes are computed and their difference reported.
struct PairingValue {
  Mat value;
  double crossResidual;
};
PairingValue pairing(const Pmu& p, const Functional& omega,
                     const Functional& upsilon, double tol = kDefaultTol);

/// Slice functionals on a product space: phi * Id and Id * psi as tuple
/// functionals built from the leg operators.
Functional sliceLeft(const Rtp& rtp, const Functional& phi,
                     double tol = kDefaultTol);  // tuples |xi>_1
Functional sliceRight(const Rtp& rtp, const Functional& psi,
                      double tol = kDefaultTol);  // tuples |eta>_2

/// Expand an evaluation map into a tuple functional over the given leg
/// spaces; the least-squares residual certifies representability.
Functional functionalFromEval(
    const std::function<Mat(const Mat&)>& evalMap,
    const OperatorSpace& etaSide, const OperatorSpace& etaPSide,
    const std::vector<Mat>& domainSpan, double tol = kDefaultTol);

/// Groupoid formulas (multiplication operator and convolution operator in
/// the orthonormal gauge).
Mat multOp(const Pmu& p, const std::vector<Cplx>& f);
Mat convOp(const Pmu& p, const std::vector<Cplx>& f);

}  // namespace qgd
