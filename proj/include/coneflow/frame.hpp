#pragma once

// Frame geometry for cohomogeneity-one metrics over S^3 / RP^3,
//
//     g = dt^2 + a1(t)^2 (e^1)^2 + a2(t)^2 ((e^2)^2 + (e^3)^2),
//
// written in the Cartan coframe e^1, e^2, e^3 with structure equations
// d e^i = 2 e^{i+1} ^ e^{i+2} (indices cyclic in {1,2,3}).  All components
// are reported in the orthonormal frame
//
//     eps^0 = dt,  eps^1 = a1 e^1,  eps^2 = a2 e^2,  eps^3 = a2 e^3,
//
// and curvature is normalized so that R^i_{jkl} = 2 * (coefficient of
// eps^k ^ eps^l in Omega^i_j).  In this normalization the unit round
// sphere has Ric = 4 * id, twice the more common convention; everything
// downstream (flow right-hand sides, Einstein constants) is consistent
// with it.
//
// The one-parameter conformally round ansatz a1 = a2 = f is a special
// case throughout.  a1 = 0 encodes the collapsed Hopf fiber (bolt locus);
// it is a legal state for ricci_bar but a domain error for the form-valued
// operations, whose printed coefficients divide by a1.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace coneflow {

/// Fixed frame conventions; see the header comment.
struct FrameConvention {
  /// [xi_i, xi_{i+1}] = 2 xi_{i+2}, equivalently d e^i = 2 e^{i+1} ^ e^{i+2}.
  static constexpr double structure_constant = 2.0;
  /// Converts a curvature-block coefficient into R^i_{jkl}.
  static constexpr double curvature_factor = 2.0;
};

/// State (a1, a2) of the two-parameter ansatz together with t-derivatives.
/// Second derivatives are optional; only the ambient-curvature operations
/// need them.
template <class Scalar = double>
struct TwoParamJet {
  Scalar a1{};
  Scalar a2{};
  Scalar da1{};
  Scalar da2{};
  std::optional<Scalar> dda1{};
  std::optional<Scalar> dda2{};

  /// One-parameter ansatz a1 = a2 = f.
  static TwoParamJet conformal(Scalar f, Scalar df) {
    return TwoParamJet{f, f, df, df, std::nullopt, std::nullopt};
  }
  static TwoParamJet conformal(Scalar f, Scalar df, Scalar ddf) {
    return TwoParamJet{f, f, df, df, ddf, ddf};
  }

  bool has_second_derivatives() const { return dda1.has_value() && dda2.has_value(); }
  bool is_conformal() const {
    return a1 == a2 && da1 == da2 &&
           (!has_second_derivatives() || *dda1 == *dda2);
  }
};

/// Sparse coefficients of the connection form: entry (i, j, k) with i < j
/// stores c in omega^i_j = c * eps^k; skew symmetry supplies (j, i, k) = -c.
///
/// Sign convention for the stored upper triangle: the radial entries
/// (0,i,i) carry a_i'/a_i (positive for an expanding profile), the
/// tangential entries are (1,2,3) = -a1/a2^2, (1,3,2) = +a1/a2^2 and
/// (2,3,1) = (2 a2^2 - a1^2)/(a1 a2^2).  The round case a1 = a2 = tau with
/// unit speed gives 1/tau in every radial slot and +1/tau in (2,3,1).
template <class Scalar = double>
struct ConnectionForm {
  struct Entry {
    int i, j, k;
    Scalar c;
  };
  std::array<Entry, 6> entries;

  /// Coefficient of eps^k in omega^i_j, for any i, j (skew handled here).
  Scalar coefficient(int i, int j, int k) const {
    for (const Entry& e : entries) {
      if (e.i == i && e.j == j && e.k == k) return e.c;
      if (e.i == j && e.j == i && e.k == k) return -e.c;
    }
    return Scalar(0);
  }
};

/// The six ambient curvature blocks Omega^i_j, i < j.  Each block of this
/// ansatz has one radial term (eps^0 or eps^1 paired with the complementary
/// index) and one tangential term; terms are stored with k < l.
template <class Scalar = double>
struct CurvatureBlocks {
  struct Term {
    int k, l;
    Scalar c;
  };
  struct Block {
    int i, j;
    std::array<Term, 2> terms;
  };
  std::array<Block, 6> blocks;  // (0,1),(0,2),(0,3),(1,2),(1,3),(2,3)

  const Block& block(int i, int j) const {
    for (const Block& b : blocks)
      if (b.i == i && b.j == j) return b;
    throw std::invalid_argument("curvature block indices must satisfy 0 <= i < j <= 3");
  }

  /// Coefficient of eps^i ^ eps^j in Omega^i_j (the sectional term).
  Scalar sectional(int i, int j) const {
    const Block& b = block(i, j);
    for (const Term& t : b.terms)
      if (t.k == i && t.l == j) return t.c;
    return Scalar(0);
  }
};

/// Tangential curvature blocks of the metric restricted to S^3 (the bar
/// quantities): coefficients of eps^1^eps^2 in Omega-bar^1_2, eps^1^eps^3 in
/// Omega-bar^1_3 and eps^2^eps^3 in Omega-bar^2_3.
template <class Scalar = double>
struct RestrictedCurvature {
  Scalar c12{};
  Scalar c13{};
  Scalar c23{};
};

/// Diagonal Ricci components and scalar curvature in the orthonormal frame.
/// Restricted (bar) diagnostics carry ric00 = 0 and scalar = ric11 + 2 ric22.
template <class Scalar = double>
struct RicciDiagnostics {
  Scalar ric00{};
  Scalar ric11{};
  Scalar ric22{};
  Scalar ric33{};
  Scalar scalar{};
  bool is_ambient = false;
};

/// Residuals of the anti-self-duality conditions omega^0_1 = -omega^2_3,
/// omega^0_2 = omega^1_3 evaluated on a first-order jet.  Both vanish on
/// the flat profile a1 = a2 = t and on the Eguchi-Hanson profile.
template <class Scalar = double>
struct AsdResidual {
  Scalar rho1{};  // a1'/a1 + (a1^2 - 2 a2^2)/(a1 a2^2)
  Scalar rho2{};  // a2'/a2 - a1/a2^2
};

/// Second fundamental form data of the round sphere of radius tau inside
/// the flat cone, plus the e-basis rate check (g-bar)'_tau = -2 b.
struct SecondFundamentalRound {
  double b_orthonormal;     // b_jk = -(1/tau) delta_jk
  double b_e_basis;         // -tau on the diagonal
  double gbar_rate_e_basis; // 2 tau on the diagonal, equal to -2 b_e_basis
};

namespace detail {
template <class Scalar>
void require_positive_scales(Scalar a1, Scalar a2, const char* who) {
  if (!(a2 > Scalar(0)))
    throw std::domain_error(std::string(who) + ": requires a2 > 0");
  if (!(a1 > Scalar(0)))
    throw std::domain_error(std::string(who) + ": requires a1 > 0");
}
}  // namespace detail

template <class Scalar>
ConnectionForm<Scalar> connection_form(const TwoParamJet<Scalar>& jet) {
  detail::require_positive_scales(jet.a1, jet.a2, "connection_form");
  const Scalar a1 = jet.a1, a2 = jet.a2;
  const Scalar a2sq = a2 * a2;
  const Scalar mix = a1 / a2sq;
  return ConnectionForm<Scalar>{{{
      {0, 1, 1, jet.da1 / a1},
      {0, 2, 2, jet.da2 / a2},
      {0, 3, 3, jet.da2 / a2},
      {1, 2, 3, -mix},
      {1, 3, 2, mix},
      {2, 3, 1, (Scalar(2) * a2sq - a1 * a1) / (a1 * a2sq)},
  }}};
}

template <class Scalar>
CurvatureBlocks<Scalar> curvature_blocks(const TwoParamJet<Scalar>& jet) {
  detail::require_positive_scales(jet.a1, jet.a2, "curvature_blocks");
  if (!jet.has_second_derivatives())
    throw std::invalid_argument("curvature_blocks: jet must carry second derivatives");
  const Scalar a1 = jet.a1, a2 = jet.a2, da1 = jet.da1, da2 = jet.da2;
  const Scalar dda1 = *jet.dda1, dda2 = *jet.dda2;
  const Scalar a2sq = a2 * a2;
  const Scalar a2cu = a2sq * a2;
  const Scalar a2q = a2sq * a2sq;

  // Radial cross coefficient shared by Omega^0_2, Omega^0_3, Omega^1_2, Omega^1_3.
  const Scalar x = da1 / a2sq - a1 * da2 / a2cu;
  // Tangential sectional coefficient of Omega^1_2 and Omega^1_3.
  const Scalar y = a1 * a1 / a2q - da1 * da2 / (a1 * a2);
  // The eps^2^eps^3 coefficient of Omega^0_1 (and the eps^0^eps^1 of Omega^2_3
  // with opposite sign grouping).
  const Scalar w = Scalar(2) * a1 * da2 / a2cu - Scalar(2) * da1 / a2sq;
  const Scalar s23 = Scalar(4) / a2sq - Scalar(3) * a1 * a1 / a2q - da2 * da2 / a2sq;

  using B = typename CurvatureBlocks<Scalar>::Block;
  return CurvatureBlocks<Scalar>{{{
      B{0, 1, {{{0, 1, -dda1 / a1}, {2, 3, w}}}},
      B{0, 2, {{{0, 2, -dda2 / a2}, {1, 3, -x}}}},
      B{0, 3, {{{0, 3, -dda2 / a2}, {1, 2, x}}}},
      B{1, 2, {{{0, 3, x}, {1, 2, y}}}},
      B{1, 3, {{{0, 2, -x}, {1, 3, y}}}},
      B{2, 3, {{{0, 1, w}, {2, 3, s23}}}},
  }}};
}

/// Curvature blocks of the induced metric on S^3, computed with the
/// tangential part of the connection and the S^3 differential at frozen t.
/// The Gauss-equation shortcut Omega^i_j - omega^i_0 ^ omega^0_j gives the
/// same tangential coefficients for this ansatz.
template <class Scalar>
RestrictedCurvature<Scalar> restricted_curvature_blocks(Scalar a1, Scalar a2) {
  detail::require_positive_scales(a1, a2, "restricted_curvature_blocks");
  const Scalar a2sq = a2 * a2;
  const Scalar a2q = a2sq * a2sq;
  const Scalar fiber = a1 * a1 / a2q;
  return RestrictedCurvature<Scalar>{fiber, fiber, Scalar(4) / a2sq - Scalar(3) * fiber};
}

/// Ricci tensor of the induced metric on S^3 (never depends on derivatives).
template <class Scalar>
RicciDiagnostics<Scalar> ricci_bar(Scalar a1, Scalar a2) {
  if (!(a2 > Scalar(0))) throw std::domain_error("ricci_bar: requires a2 > 0");
  if (!(a1 >= Scalar(0))) throw std::domain_error("ricci_bar: requires a1 >= 0");
  const Scalar a2sq = a2 * a2;
  const Scalar r11 = Scalar(4) * a1 * a1 / (a2sq * a2sq);
  const Scalar r22 = (Scalar(4) / a2sq) * (Scalar(2) - a1 * a1 / a2sq);
  RicciDiagnostics<Scalar> out;
  out.ric00 = Scalar(0);
  out.ric11 = r11;
  out.ric22 = r22;
  out.ric33 = r22;
  out.scalar = r11 + Scalar(2) * r22;
  out.is_ambient = false;
  return out;
}

/// Ambient (4-dimensional) Ricci diagonal.  The conformally round case uses
/// the closed one-parameter formulas; the generic case is assembled as
/// curvature_factor times the sums of sectional block coefficients.
template <class Scalar>
RicciDiagnostics<Scalar> ricci_ambient(const TwoParamJet<Scalar>& jet) {
  detail::require_positive_scales(jet.a1, jet.a2, "ricci_ambient");
  if (!jet.has_second_derivatives())
    throw std::invalid_argument("ricci_ambient: jet must carry second derivatives");
  RicciDiagnostics<Scalar> out;
  out.is_ambient = true;
  if (jet.is_conformal()) {
    const Scalar f = jet.a1, df = jet.da1, ddf = *jet.dda1;
    const Scalar fsq = f * f;
    out.ric00 = Scalar(-6) * ddf / f;
    out.ric11 = (Scalar(4) - Scalar(4) * df * df - Scalar(2) * ddf * f) / fsq;
    out.ric22 = out.ric11;
    out.ric33 = out.ric11;
    out.scalar = (Scalar(3) / fsq) *
                 (Scalar(4) - Scalar(4) * df * df - Scalar(4) * ddf * f);
    return out;
  }
  const CurvatureBlocks<Scalar> omega = curvature_blocks(jet);
  const Scalar s01 = omega.sectional(0, 1);
  const Scalar s02 = omega.sectional(0, 2);
  const Scalar s03 = omega.sectional(0, 3);
  const Scalar s12 = omega.sectional(1, 2);
  const Scalar s13 = omega.sectional(1, 3);
  const Scalar s23 = omega.sectional(2, 3);
  const Scalar factor = Scalar(FrameConvention::curvature_factor);
  out.ric00 = factor * (s01 + s02 + s03);
  out.ric11 = factor * (s01 + s12 + s13);
  out.ric22 = factor * (s02 + s12 + s23);
  out.ric33 = factor * (s03 + s13 + s23);
  out.scalar = out.ric00 + out.ric11 + out.ric22 + out.ric33;
  return out;
}

inline SecondFundamentalRound second_fundamental_round(double tau) {
  if (!(tau > 0.0)) throw std::domain_error("second_fundamental_round: requires tau > 0");
  return SecondFundamentalRound{-1.0 / tau, -tau, 2.0 * tau};
}

template <class Scalar>
AsdResidual<Scalar> asd_residual(const TwoParamJet<Scalar>& jet) {
  detail::require_positive_scales(jet.a1, jet.a2, "asd_residual");
  const Scalar a1 = jet.a1, a2 = jet.a2;
  const Scalar a2sq = a2 * a2;
  AsdResidual<Scalar> out;
  out.rho1 = jet.da1 / a1 + (a1 * a1 - Scalar(2) * a2sq) / (a1 * a2sq);
  out.rho2 = jet.da2 / a2 - a1 / a2sq;
  return out;
}

/// Coefficient of eps^1 ^ eps^2 ^ eps^3 in psi ^ d-bar psi for psi = eps^index.
/// A nonzero value certifies the contact condition psi ^ d psi != 0.
template <class Scalar>
Scalar contact_pairing(int index, Scalar a1, Scalar a2) {
  if (index < 1 || index > 3)
    throw std::invalid_argument("contact_pairing: index must be 1, 2 or 3");
  detail::require_positive_scales(a1, a2, "contact_pairing");
  if (index == 1) return Scalar(2) * a1 / (a2 * a2);
  return Scalar(2) / a1;
}

/// Ingredients of the contact-form evolution (* psi)' = d-bar psi for
/// psi = eps^index: the t-rate of the Hodge-dual coefficient in the frozen
/// e-basis and the d-bar coefficient it must match.
///   index 1:  * eps^1 = a2^2 e^2^e^3,  rate d(a2^2)/dt,  d-bar coefficient 2 a1
///   index 2:  * eps^2 = a1 a2 e^3^e^1, rate d(a1 a2)/dt, d-bar coefficient 2 a2
///   index 3:  symmetric to index 2.
template <class Scalar>
std::pair<Scalar, Scalar> hodge_dbar_pair(int index, const TwoParamJet<Scalar>& jet) {
  if (index < 1 || index > 3)
    throw std::invalid_argument("hodge_dbar_pair: index must be 1, 2 or 3");
  detail::require_positive_scales(jet.a1, jet.a2, "hodge_dbar_pair");
  if (index == 1)
    return {Scalar(2) * jet.a2 * jet.da2, Scalar(2) * jet.a1};
  return {jet.da1 * jet.a2 + jet.a1 * jet.da2, Scalar(2) * jet.a2};
}

}  // namespace coneflow
