#include "coneflow/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace coneflow {

OracleKind OracleKind::dirac_profile(int k) {
  if (k != -1 && k != 0 && k != 1)
    throw std::invalid_argument("OracleKind: Dirac curvature K must be -1, 0 or +1");
  OracleKind o;
  o.family = Family::DiracProfile;
  o.k = k;
  return o;
}
OracleKind OracleKind::ricci_round_profile(double t0) {
  if (!std::isfinite(t0)) throw std::invalid_argument("OracleKind: t0 must be finite");
  OracleKind o;
  o.family = Family::RicciRoundProfile;
  o.t0 = t0;
  return o;
}
OracleKind OracleKind::nut(double t0) {
  if (!std::isfinite(t0)) throw std::invalid_argument("OracleKind: t0 must be finite");
  OracleKind o;
  o.family = Family::Nut;
  o.t0 = t0;
  return o;
}
OracleKind OracleKind::bolt(double t0) {
  if (!std::isfinite(t0)) throw std::invalid_argument("OracleKind: t0 must be finite");
  OracleKind o;
  o.family = Family::Bolt;
  o.t0 = t0;
  return o;
}
OracleKind OracleKind::eguchi_hanson(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("OracleKind: bolt radius a must be positive");
  OracleKind o;
  o.family = Family::EguchiHanson;
  o.a = a;
  return o;
}

FlowState closed_form(const OracleKind& kind, double t) {
  FlowState out;
  out.t = t;
  switch (kind.family) {
    case OracleKind::Family::DiracProfile: {
      const Vec3<double> p = constant_curvature_profile(kind.k, t);
      out.vars = Eigen::Vector2d(p[0], p[1]);
      return out;
    }
    case OracleKind::Family::RicciRoundProfile: {
      if (!(t < kind.t0)) throw std::domain_error("closed_form: requires t < t0");
      out.vars.resize(1);
      out.vars[0] = std::sqrt(8.0 * (kind.t0 - t));
      return out;
    }
    case OracleKind::Family::Nut: {
      if (!(t < kind.t0)) throw std::domain_error("closed_form: requires t < t0");
      const double v = 8.0 * (kind.t0 - t);
      out.vars = Eigen::Vector2d(v, v);
      return out;
    }
    case OracleKind::Family::Bolt: {
      if (!(t < kind.t0)) throw std::domain_error("closed_form: requires t < t0");
      out.vars = Eigen::Vector2d(0.0, 16.0 * (kind.t0 - t));
      return out;
    }
    case OracleKind::Family::EguchiHanson:
      throw std::invalid_argument(
          "closed_form: the Eguchi-Hanson profile has no closed t-parametrization; "
          "use eh_profile / eh_match");
  }
  throw std::logic_error("closed_form: unreachable");
}

EhPoint eh_profile(double a, double r) {
  if (!(a > 0.0)) throw std::invalid_argument("eh_profile: requires a > 0");
  if (r < a) throw std::domain_error("eh_profile: requires r >= a");
  EhPoint p;
  p.a2 = r;
  const double q = 1.0 - (a / r) * (a / r) * (a / r) * (a / r);
  if (q <= 0.0) {
    p.a1 = 0.0;
    p.dt_dr = std::numeric_limits<double>::infinity();
    p.at_bolt = true;
    return p;
  }
  p.a1 = r * std::sqrt(q);
  p.dt_dr = 1.0 / std::sqrt(q);
  p.at_bolt = false;
  return p;
}

MatchReport eh_match(const Trajectory& traj, double a, double tol) {
  if (!(a > 0.0)) throw std::invalid_argument("eh_match: requires a > 0");
  if (state_dimension(traj.kind) != 2 || traj.samples.size() < 2)
    throw std::invalid_argument("eh_match: needs a two-component trajectory");
  for (std::size_t i = 1; i < traj.samples.size(); ++i)
    if (!(traj.samples[i].vars[1] > traj.samples[i - 1].vars[1]))
      throw std::runtime_error("eh_match: a2 must be strictly increasing along the trajectory");
  MatchReport rep;
  rep.n_points = traj.samples.size();
  for (const FlowState& s : traj.samples) {
    const double a1 = s.vars[0], a2 = s.vars[1];
    const double ratio = a / a2;
    const double q = 1.0 - ratio * ratio * ratio * ratio;
    const double predicted = a2 * std::sqrt(std::max(0.0, q));
    const double dev = std::abs(a1 - predicted);
    if (dev > rep.max_abs_deviation) {
      rep.max_abs_deviation = dev;
      rep.location_of_max = s.t;
    }
  }
  rep.passed = rep.max_abs_deviation <= tol;
  return rep;
}

namespace {

bool uniform_triple(double t0, double t1, double t2) {
  const double h1 = t1 - t0, h2 = t2 - t1;
  return std::abs(h1 - h2) <= 1e-6 * 0.5 * (h1 + h2);
}

}  // namespace

std::vector<double> beta_second_order_residual(const Trajectory& traj) {
  if (traj.kind.family != FlowFamily::RicciBerger)
    throw std::invalid_argument("beta_second_order_residual: needs a RicciBerger trajectory");
  const auto& s = traj.samples;
  if (s.size() < 5)
    throw std::invalid_argument("beta_second_order_residual: needs at least 5 samples");
  std::vector<double> out;
  out.reserve(s.size());
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (!uniform_triple(s[i - 1].t, s[i].t, s[i + 1].t)) continue;
    const double h = 0.5 * (s[i + 1].t - s[i - 1].t);
    const double b0 = s[i - 1].vars[1], b1 = s[i].vars[1], b2 = s[i + 1].vars[1];
    const double db = (b2 - b0) / (2.0 * h);
    const double ddb = (b2 - 2.0 * b1 + b0) / (h * h);
    out.push_back(b1 * ddb + 2.0 * db * db + 48.0 * db + 256.0);
  }
  return out;
}

double alpha_first_integral(double alpha, double beta, double beta_prime) {
  return alpha - beta * (beta_prime + 16.0) / 8.0;
}

Implicit7Report implicit7_check(const Trajectory& traj) {
  if (traj.kind.family != FlowFamily::RicciBerger)
    throw std::invalid_argument("implicit7_check: needs a RicciBerger trajectory");
  const auto& s = traj.samples;
  if (s.size() < 2) throw std::invalid_argument("implicit7_check: needs at least two samples");

  const auto beta_rate = [](const FlowState& st) {
    return 8.0 * st.vars[0] / st.vars[1] - 16.0;
  };

  Implicit7Report rep;
  // First sample where the arctan form is real (beta' > -8, i.e. alpha > beta)
  // and away from the branch point beta' = 0.
  std::size_t fit = s.size();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double db = beta_rate(s[i]);
    if (db > -8.0 + 1e-3 && std::abs(db) > 1e-3) {
      fit = i;
      break;
    }
  }
  if (fit == s.size()) {
    rep.branch_available = false;  // alpha <= beta throughout (or degenerate)
    return rep;
  }

  const double db_fit = beta_rate(s[fit]);
  const double beta_fit = s[fit].vars[1];
  const double s_fit = beta_fit * std::abs(db_fit) / std::sqrt(8.0 + db_fit);
  const double c1 = -s_fit * (16.0 + db_fit) / db_fit;

  const auto lhs = [c1](double beta) {
    const double root = std::sqrt(c1 * c1 - 32.0 * beta * beta);
    return -beta / 16.0 -
           std::sqrt(2.0) / 128.0 * c1 * std::atan(4.0 * std::sqrt(2.0) * beta / root);
  };

  rep.branch_available = true;
  rep.c1 = c1;
  rep.fit_index = fit;
  rep.c2 = lhs(beta_fit) - s[fit].t;

  const double sign_fit = db_fit > 0.0 ? 1.0 : -1.0;
  for (std::size_t i = fit; i < s.size(); ++i) {
    const double beta = s[i].vars[1];
    const double db = beta_rate(s[i]);
    if (!(db > -8.0) || db * sign_fit <= 0.0) break;  // branch or monotonicity lost
    const double disc = c1 * c1 - 32.0 * beta * beta;
    if (!(disc > 1e-12 * c1 * c1)) break;  // at the arctan branch point
    rep.ts.push_back(s[i].t);
    rep.residuals.push_back(lhs(beta) - s[i].t - rep.c2);
    const double root = std::sqrt(disc);
    rep.rate_defects.push_back(-db * (c1 + root) / (16.0 * root) - 1.0);
  }
  return rep;
}

SingularitySlopes singularity_slopes(const Trajectory& traj) {
  if (traj.kind.family != FlowFamily::RicciBerger)
    throw std::invalid_argument("singularity_slopes: needs a RicciBerger trajectory");
  if (traj.samples.empty() || !(traj.samples.front().vars[0] > 0.0))
    throw std::invalid_argument("singularity_slopes: requires alpha(0) > 0");
  if (traj.stop.reason != StopEvent::Reason::Collapse)
    throw std::runtime_error("singularity_slopes: trajectory did not reach collapse");
  const double threshold = 1e-3 * traj.samples.front().vars[0];
  for (auto it = traj.samples.rbegin(); it != traj.samples.rend(); ++it) {
    if (it->vars[0] < threshold) {
      const Vec2<double> rate = rhs_ricci_berger(it->vars[0], it->vars[1]);
      return SingularitySlopes{rate[0], rate[1], it->t};
    }
  }
  throw std::runtime_error("singularity_slopes: no sample below 1e-3 * alpha(0)");
}

double einstein_residual(const TwoParamJet<double>& jet, int k) {
  const RicciDiagnostics<double> ric = ricci_ambient(jet);
  const double target = 6.0 * static_cast<double>(k);
  return std::max(std::max(std::abs(ric.ric00 - target), std::abs(ric.ric11 - target)),
                  std::max(std::abs(ric.ric22 - target), std::abs(ric.ric33 - target)));
}

std::vector<TwoParamJet<double>> jets_from_dirac_trajectory(const Trajectory& traj) {
  if (traj.kind.family != FlowFamily::Dirac)
    throw std::invalid_argument("jets_from_dirac_trajectory: needs a Dirac trajectory");
  const auto& s = traj.samples;
  std::vector<TwoParamJet<double>> jets;
  if (s.size() < 3) return jets;
  jets.reserve(s.size());
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (!uniform_triple(s[i - 1].t, s[i].t, s[i + 1].t)) continue;
    const double h = 0.5 * (s[i + 1].t - s[i - 1].t);
    const double ddf = (s[i + 1].vars[0] - 2.0 * s[i].vars[0] + s[i - 1].vars[0]) / (h * h);
    jets.push_back(TwoParamJet<double>::conformal(s[i].vars[0], s[i].vars[1], ddf));
  }
  return jets;
}

std::vector<TwoParamJet<double>> jets_from_two_param_trajectory(const Trajectory& traj,
                                                                bool rhs_first_derivatives,
                                                                std::size_t sub_sample) {
  if (state_dimension(traj.kind) != 2)
    throw std::invalid_argument("jets_from_two_param_trajectory: needs a two-component flow");
  if (sub_sample == 0) sub_sample = 1;
  std::vector<const FlowState*> grid;
  for (std::size_t i = 0; i < traj.samples.size(); i += sub_sample)
    grid.push_back(&traj.samples[i]);
  std::vector<TwoParamJet<double>> jets;
  if (grid.size() < 3) return jets;

  // First-derivative series: from the flow right-hand side at each grid
  // point, or by central differences of the positions.
  std::vector<Eigen::Vector2d> first(grid.size(),
                                     Eigen::Vector2d::Constant(std::numeric_limits<double>::quiet_NaN()));
  if (rhs_first_derivatives) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (auto r = flow_rhs(traj.kind, grid[i]->vars)) first[i] = *r;
    }
  } else {
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      if (!uniform_triple(grid[i - 1]->t, grid[i]->t, grid[i + 1]->t)) continue;
      const double h = 0.5 * (grid[i + 1]->t - grid[i - 1]->t);
      first[i] = (grid[i + 1]->vars - grid[i - 1]->vars) / (2.0 * h);
    }
  }

  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (!uniform_triple(grid[i - 1]->t, grid[i]->t, grid[i + 1]->t)) continue;
    const double h = 0.5 * (grid[i + 1]->t - grid[i - 1]->t);
    TwoParamJet<double> jet;
    jet.a1 = grid[i]->vars[0];
    jet.a2 = grid[i]->vars[1];
    Eigen::Vector2d dd;
    if (rhs_first_derivatives) {
      if (!first[i - 1].allFinite() || !first[i].allFinite() || !first[i + 1].allFinite())
        continue;
      jet.da1 = first[i][0];
      jet.da2 = first[i][1];
      dd = (first[i + 1] - first[i - 1]) / (2.0 * h);
    } else {
      if (!first[i].allFinite()) continue;
      jet.da1 = first[i][0];
      jet.da2 = first[i][1];
      dd = (grid[i + 1]->vars - 2.0 * grid[i]->vars + grid[i - 1]->vars) / (h * h);
    }
    jet.dda1 = dd[0];
    jet.dda2 = dd[1];
    jets.push_back(jet);
  }
  return jets;
}

}  // namespace coneflow
