#ifndef SPINET_CLOSURES_HPP
#define SPINET_CLOSURES_HPP

#include "spinet/pauli.hpp"

namespace spinet {

/// Pauli components of the Lagrange multipliers A = a0 + av.sigma and
/// C = c0 + cv.sigma of the Maxwellian exp(A + C|k|^2/2).
struct LagrangeParams {
  double a0 = 0.0;
  Vec3 av = Vec3::Zero();
  double c0 = -1.0;
  Vec3 cv = Vec3::Zero();

  bool integrable() const { return c0 + cv.norm() < 0.0; }
};

/// Second-order moments (n, W) in Pauli components.
struct MomentSet {
  double n0 = 0.0;
  Vec3 nv = Vec3::Zero();
  double W0 = 0.0;
  Vec3 Wv = Vec3::Zero();
};

/// MomentSet plus the fourth moment (1/6) int M |k|^4 dk.
struct FullMoments {
  MomentSet m;
  double Q0 = 0.0;
  Vec3 Qv = Vec3::Zero();
};

/// (1+z)^alpha - (1-z)^alpha for z in [0,1], accurate for small z.
double pow_diff(double z, double alpha);
/// pow_diff(z, alpha)/z with the limit 2*alpha at z = 0.
double pow_diff_over_z(double z, double alpha);

PauliVec maxwellian_pauli(const LagrangeParams& params, double k2);

/// Moments of the Maxwellian by adaptive Gauss-Kronrod radial quadrature.
/// Throws std::invalid_argument for non-integrable parameters and
/// std::runtime_error if the error estimate misses rel_tol.
FullMoments moments_by_quadrature(const LagrangeParams& params, double rel_tol = 1e-9);

// -- first model: cv = 0 ---------------------------------------------------

struct Model1Closure {
  Vec3 Wv;
  double Q0;
};

Model1Closure model1_closure(double n0, const Vec3& nv, double T);
FullMoments model1_moments(double n0, const Vec3& nv, double T);
/// Multipliers with kappa+- = n+-, theta = T. Requires |nv| < n0.
LagrangeParams model1_params(double n0, const Vec3& nv, double T);

// -- second model: av = 0 --------------------------------------------------

struct Model2Coeffs {
  double D;  ///< diffusion coefficient D(n+, n-)
  double p;  ///< polarization factor p(n+, n-)
};

/// Requires np >= nm >= 0 and np > 0.
Model2Coeffs model2_coeffs(double np, double nm);
/// (a^{5/3} - b^{5/3}) / (a^{5/3} + b^{5/3}) without ordering requirement.
double model2_polarization_factor(double a, double b);

struct Model2Z {
  double Z0;
  Vec3 Zv;
  Vec3 nv;
};

/// Auxiliary fluxes Z0, Zv and the spin density implied by (n0, W0, Wv).
/// Requires n0 > 0 and W0 > |Wv|.
Model2Z model2_Z(double n0, double W0, const Vec3& Wv);
FullMoments model2_moments(double n0, double W0, const Vec3& Wv);
/// Inverse parametrization K = (2pi)^{3/2} e^{a0}, theta+- = -1/(c0 +- |cv|).
LagrangeParams model2_params(double n0, double W0, const Vec3& Wv);
/// Closed-form moments of the av = 0 Maxwellian directly from its multipliers.
FullMoments model2_moments_from_params(const LagrangeParams& params);

// -- third model: av = lambda*cv -------------------------------------------

struct Model3Closure {
  double Q0;
  Vec3 Qv;
};

Model3Closure model3_closure(double np, double nm, double Tp, double Tm, const Vec3& s);
FullMoments model3_moments(double np, double nm, double Tp, double Tm, const Vec3& s);
/// kappa+- = n+-, theta+- = T+-, gamma = s. Rejects Tp < Tm and the
/// degenerate Tp == Tm, np != nm case, where no finite lambda exists.
LagrangeParams model3_params(double np, double nm, double Tp, double Tm, const Vec3& s);

struct SpinRhsInput {
  double np = 1.0, nm = 1.0, Tp = 1.0, Tm = 1.0;
  Vec3 s = Vec3::UnitZ();
  Mat3 grad_s = Mat3::Zero();   ///< column j holds d s / d x_j
  Vec3 lap_s = Vec3::Zero();
  Vec3 grad_nT = Vec3::Zero();  ///< gradient of n+T+ - n-T-
  Vec3 grad_V = Vec3::Zero();
  Vec3 omega_e = Vec3::Zero();
};

/// Pointwise right-hand side of the spin-accumulation equation,
///   c s x (lap_s x s) + grad_s (2 grad_nT/(n+ - n-) + grad_V) - omega_e x s,
/// with c = (n+T+ - n-T-)/(n+ - n-).
Vec3 model3_s_rhs(const SpinRhsInput& in);

}  // namespace spinet

#endif
