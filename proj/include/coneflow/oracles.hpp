#pragma once

// Closed-form solutions, first integrals and matchers used as independent
// ground truth for integrator output.  Everything here is deterministic and
// shares no code path with the right-hand sides under test, except the
// Ricci formulas of frame.hpp, which are pinned by their own unit suite.

#include <cstddef>
#include <optional>
#include <vector>

#include "coneflow/frame.hpp"
#include "coneflow/integrate.hpp"

namespace coneflow {

struct OracleKind {
  enum class Family { DiracProfile, RicciRoundProfile, Nut, Bolt, EguchiHanson };
  Family family = Family::DiracProfile;
  int k = 0;       // DiracProfile curvature
  double t0 = 0.0; // collapse time of the profile kinds
  double a = 1.0;  // Eguchi-Hanson bolt radius

  static OracleKind dirac_profile(int k);
  static OracleKind ricci_round_profile(double t0);
  static OracleKind nut(double t0);
  static OracleKind bolt(double t0);
  static OracleKind eguchi_hanson(double a);
};

struct MatchReport {
  double max_abs_deviation = 0.0;
  double location_of_max = 0.0;  // t (or a2 for the Eguchi-Hanson matcher)
  std::size_t n_points = 0;
  bool passed = false;
};

/// Exact state of the named solution at parameter t.  Throws std::domain_error
/// outside the solution's domain (t >= t0 for the collapsing kinds).  The
/// Eguchi-Hanson kind has no closed t-parametrization; use eh_profile.
FlowState closed_form(const OracleKind& kind, double t);

/// Eguchi-Hanson profile in the radial coordinate: a2 = r,
/// a1 = r sqrt(1 - (a/r)^4), dt/dr = (1 - (a/r)^4)^{-1/2}.  At the bolt
/// r = a the rate dt/dr is infinite and flagged.
struct EhPoint {
  double a1 = 0.0;
  double a2 = 0.0;
  double dt_dr = 0.0;
  bool at_bolt = false;
};
EhPoint eh_profile(double a, double r);

/// Parametrization-free comparison of a trajectory against the
/// Eguchi-Hanson profile with bolt radius a: per sample, the predicted
/// fiber scale is a1 = a2 sqrt(1 - (a/a2)^4) as a function of a2.
/// Requires strictly increasing a2 along the trajectory.
MatchReport eh_match(const Trajectory& traj, double a, double tol = 1e-6);

/// Central-difference residual of beta beta'' + 2 beta'^2 + 48 beta' + 256
/// at the interior samples of a RicciBerger trajectory; samples must be
/// uniformly spaced (triples around the bisected final point are skipped).
std::vector<double> beta_second_order_residual(const Trajectory& traj);

/// Defect alpha - beta (beta' + 16)/8; zero when beta' is the flow value.
double alpha_first_integral(double alpha, double beta, double beta_prime);

/// Consistency of a RicciBerger trajectory with the implicit solution
///   -beta/16 - (sqrt(2)/128) c1 arctan(4 sqrt(2) beta / sqrt(c1^2 - 32 beta^2)) = t + c2.
/// The printed arctan form is real only while beta' > -8 (alpha > beta) and
/// stays on its principal branch only while beta' keeps the sign it had at
/// the fitting sample (the branch point c1^2 = 32 beta^2 is reached exactly
/// where beta' = 0).  Constants are fitted at the first usable sample;
/// residuals are reported on the maximal run from there.
struct Implicit7Report {
  bool branch_available = false;
  double c1 = 0.0;
  double c2 = 0.0;
  std::size_t fit_index = 0;
  std::vector<double> ts;         // sample times of the validated run
  std::vector<double> residuals;  // implicit-solution defect at those times
  std::vector<double> rate_defects;  // d/dt of the left side minus 1
};
Implicit7Report implicit7_check(const Trajectory& traj);

/// Right-hand-side slopes (alpha', beta') at the last sample with
/// alpha < 1e-3 * alpha(0) of a collapsed RicciBerger trajectory; both tend
/// to -8 at the singular time regardless of how small alpha(0) > 0 is.
struct SingularitySlopes {
  double alpha_rate = 0.0;
  double beta_rate = 0.0;
  double t = 0.0;
};
SingularitySlopes singularity_slopes(const Trajectory& traj);

/// Max deviation |ric_ii - 6K| of the ambient Ricci diagonal from the
/// Einstein value in this curvature normalization.
double einstein_residual(const TwoParamJet<double>& jet, int k);

/// Jets along a Dirac trajectory: a1 = a2 = f and first derivatives from the
/// state, second derivatives by central differences of f.  Uniform interior
/// samples only.
std::vector<TwoParamJet<double>> jets_from_dirac_trajectory(const Trajectory& traj);

/// Jets along a two-parameter trajectory.  First derivatives either by pure
/// central differences (rhs_first_derivatives = false) or evaluated from the
/// flow right-hand side at each sample (true); second derivatives by central
/// differences of the chosen first-derivative series.  The sub_sample factor
/// coarsens the stencil spacing.
std::vector<TwoParamJet<double>> jets_from_two_param_trajectory(
    const Trajectory& traj, bool rhs_first_derivatives, std::size_t sub_sample = 1);

}  // namespace coneflow
