#pragma once

// Right-hand sides of the geometric-flow ODE systems on the ansatz of
// frame.hpp, the contact-form (Hitchin) residuals, and the t <-> tau
// reparametrizations that turn the constant-curvature profiles into Ricci
// flow solutions.
//
// Flow kinds:
//   RicciRound        f' = -4/f               (Ricci flow of the round S^3)
//   Dirac{K}          f'' = -K f              (second-order form of
//                     2 f'/f = sqrt(4/f^2 - 4K); f'^2 + K f^2 = 1 is a
//                     monitored first integral, not imposed)
//   RicciBerger       alpha' = -8 alpha^2/beta^2, beta' = 8 alpha/beta - 16
//                     (Ricci flow in alpha = a1^2, beta = a2^2)
//   NormalizedBerger  volume-preserving normalized Ricci flow in (a1, a2)
//   AsdEguchiHanson   a1' = 2 - a1^2/a2^2, a2' = a1/a2  (anti-self-duality,
//                     denominators cleared so the bolt start a1 = 0 is a
//                     regular initial condition)
//   Flow9             the same trajectory expressed through the restricted
//                     Ricci tensor; defined only on 0 < a1 < sqrt(2) a2
//   HitchinContact    (* psi)' = d-bar psi on the contact coframe; reduces
//                     to the anti-self-duality system

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "coneflow/frame.hpp"

namespace coneflow {

enum class FlowFamily {
  RicciRound,
  Dirac,
  RicciBerger,
  NormalizedBerger,
  AsdEguchiHanson,
  Flow9,
  HitchinContact,
};

/// Which ODE system to integrate; `k` is the curvature parameter of the
/// Dirac flow and must be -1, 0 or +1.
struct FlowKind {
  FlowFamily family = FlowFamily::RicciRound;
  int k = 0;

  static FlowKind ricci_round() { return {FlowFamily::RicciRound, 0}; }
  static FlowKind dirac(int k) {
    if (k != -1 && k != 0 && k != 1)
      throw std::invalid_argument("FlowKind: Dirac curvature K must be -1, 0 or +1");
    return {FlowFamily::Dirac, k};
  }
  static FlowKind ricci_berger() { return {FlowFamily::RicciBerger, 0}; }
  static FlowKind normalized_berger() { return {FlowFamily::NormalizedBerger, 0}; }
  static FlowKind asd_eguchi_hanson() { return {FlowFamily::AsdEguchiHanson, 0}; }
  static FlowKind flow9() { return {FlowFamily::Flow9, 0}; }
  static FlowKind hitchin_contact() { return {FlowFamily::HitchinContact, 0}; }

  bool operator==(const FlowKind&) const = default;
};

template <class Scalar = double>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
template <class Scalar = double>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

template <class Scalar>
Scalar rhs_ricci_round(Scalar f) {
  if (!(f > Scalar(0))) throw std::domain_error("rhs_ricci_round: requires f > 0");
  return Scalar(-4) / f;
}

/// State is (f, f'); regular everywhere, including the cone tip f = 0.
template <class Scalar>
Vec2<Scalar> rhs_dirac(const Vec2<Scalar>& state, int k) {
  return Vec2<Scalar>(state[1], Scalar(-k) * state[0]);
}

template <class Scalar>
Vec2<Scalar> rhs_ricci_berger(Scalar alpha, Scalar beta) {
  if (!(beta > Scalar(0))) throw std::domain_error("rhs_ricci_berger: requires beta > 0");
  if (!(alpha >= Scalar(0))) throw std::domain_error("rhs_ricci_berger: requires alpha >= 0");
  return Vec2<Scalar>(Scalar(-8) * alpha * alpha / (beta * beta),
                      Scalar(8) * alpha / beta - Scalar(16));
}

template <class Scalar>
Vec2<Scalar> rhs_normalized_berger(Scalar a1, Scalar a2) {
  if (!(a2 > Scalar(0))) throw std::domain_error("rhs_normalized_berger: requires a2 > 0");
  if (!(a1 > Scalar(0))) throw std::domain_error("rhs_normalized_berger: requires a1 > 0");
  const Scalar diff = a1 * a1 - a2 * a2;
  const Scalar a2sq = a2 * a2;
  return Vec2<Scalar>(Scalar(-16) / Scalar(3) * a1 / (a2sq * a2sq) * diff,
                      Scalar(8) / Scalar(3) * diff / (a2sq * a2));
}

template <class Scalar>
Vec2<Scalar> rhs_asd(Scalar a1, Scalar a2) {
  if (!(a2 > Scalar(0))) throw std::domain_error("rhs_asd: requires a2 > 0");
  return Vec2<Scalar>(Scalar(2) - a1 * a1 / (a2 * a2), a1 / a2);
}

/// Anti-self-duality expressed through the restricted Ricci tensor:
///   a1'/a1 = (1/2) ric22 ric11^{-1/2},   a2'/a2 = (1/2) ric11^{1/2}.
/// Returns nullopt outside 0 < a1 < sqrt(2) a2 (where ric22 <= 0 or ric11
/// degenerates); that is a domain exit, not a hard error.  Agrees with
/// rhs_asd on the shared domain.
template <class Scalar>
std::optional<Vec2<Scalar>> rhs_flow9(Scalar a1, Scalar a2) {
  if (!(a2 > Scalar(0))) throw std::domain_error("rhs_flow9: requires a2 > 0");
  if (!(a1 >= Scalar(0))) throw std::domain_error("rhs_flow9: requires a1 >= 0");
  if (a1 == Scalar(0) || !(a1 * a1 < Scalar(2) * a2 * a2)) return std::nullopt;
  using std::sqrt;
  const RicciDiagnostics<Scalar> ric = ricci_bar(a1, a2);
  const Scalar root = sqrt(ric.ric11);
  return Vec2<Scalar>(a1 * (ric.ric22 / Scalar(2)) / root, a2 * root / Scalar(2));
}

/// Hitchin flow resolved for the rates: a2' from (* eps^1)' = d-bar eps^1,
/// then a1' from (* eps^2)' = d-bar eps^2.  Same trajectory as rhs_asd.
template <class Scalar>
Vec2<Scalar> rhs_hitchin_contact(Scalar a1, Scalar a2) {
  if (!(a2 > Scalar(0))) throw std::domain_error("rhs_hitchin_contact: requires a2 > 0");
  const Scalar da2 = a1 / a2;
  return Vec2<Scalar>((Scalar(2) * a2 - a1 * da2) / a2, da2);
}

/// Residuals of (* psi)' = d-bar psi for psi = eps^1, eps^2, eps^3:
///   r1 = d(a2^2)/dt - 2 a1,  r2 = d(a1 a2)/dt - 2 a2,  r3 = r2.
/// All three vanish iff (a1', a2') solves the anti-self-duality system.
template <class Scalar>
Vec3<Scalar> hitchin_residuals(Scalar a1, Scalar a2, Scalar da1, Scalar da2) {
  if (!(a2 > Scalar(0))) throw std::domain_error("hitchin_residuals: requires a2 > 0");
  if (!(a1 > Scalar(0))) throw std::domain_error("hitchin_residuals: requires a1 > 0");
  const Scalar r1 = Scalar(2) * (a2 * da2 - a1);
  const Scalar r2 = a2 * da1 + a1 * da2 - Scalar(2) * a2;
  return Vec3<Scalar>(r1, r2, r2);
}

/// Constant-curvature profile f_K and derivatives: t for K = 0, sin t for
/// K = +1, sinh t for K = -1.  Solution of f'' = -K f with f(0) = 0, f'(0) = 1.
template <class Scalar>
Vec3<Scalar> constant_curvature_profile(int k, Scalar t) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  switch (k) {
    case 0: return Vec3<Scalar>(t, Scalar(1), Scalar(0));
    case 1: return Vec3<Scalar>(sin(t), cos(t), -sin(t));
    case -1: return Vec3<Scalar>(sinh(t), cosh(t), sinh(t));
    default: throw std::invalid_argument("constant_curvature_profile: K must be -1, 0 or +1");
  }
}

namespace detail {
template <class Scalar>
void require_profile_domain(int k, Scalar t, const char* who) {
  if (!(t > Scalar(0)))
    throw std::domain_error(std::string(who) + ": requires t > 0");
  if (k == 1 && !(t < Scalar(std::numbers::pi)))
    throw std::domain_error(std::string(who) + ": requires t < pi for K = +1");
}
}  // namespace detail

/// Reparametrization tau = h_K(t) = -f_K(t)^2 / 8 that makes the swept
/// constant-curvature metric a Ricci flow solution in tau.  The additive
/// constant is fixed to 0.  Note the uniform minus sign: it is forced by
/// d(tau)/dt = -f f'/4, the rate at which d(g-bar)/d(tau) = -2 Ric-bar holds.
template <class Scalar>
Scalar tau_reparametrization(int k, Scalar t) {
  detail::require_profile_domain(k, t, "tau_reparametrization");
  const Scalar f = constant_curvature_profile(k, t)[0];
  return -f * f / Scalar(8);
}

/// Residual | (d g-bar/dt)/(d tau/dt) + 2 Ric-bar | in the orthonormal frame,
/// with d(tau)/dt = -f f'/4 taken analytically.  Where f' = 0 (the turning
/// point t = pi/2 for K = +1) the quotient is 0/0; the equivalent form
/// multiplied through by d(tau)/dt is used there.
template <class Scalar>
Scalar verify_prop1(int k, Scalar t) {
  using std::abs;
  detail::require_profile_domain(k, t, "verify_prop1");
  const Vec3<Scalar> p = constant_curvature_profile(k, t);
  const Scalar f = p[0], df = p[1];
  const Scalar gbar_rate = Scalar(2) * df / f;          // orthonormal d(g-bar)/dt
  const Scalar ric = Scalar(4) / (f * f);               // ric-bar, any diagonal slot
  const Scalar dtau_dt = -f * df / Scalar(4);
  if (abs(dtau_dt) < Scalar(1e-12))
    return abs(gbar_rate + Scalar(2) * ric * dtau_dt);
  return abs(gbar_rate / dtau_dt + Scalar(2) * ric);
}

}  // namespace coneflow
