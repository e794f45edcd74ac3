#include "coneflow/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace coneflow {

namespace {

constexpr double kStepFloor = 1e-12;

using Vec = Eigen::VectorXd;

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

// Right-hand side without positivity checks, so the diagnostic continuation
// past a collapse can keep evaluating it; nullopt only when a denominator
// vanishes or the result is not finite.  Must agree with the rhs_* functions
// of flows.hpp on their domains (pinned by a unit test).
std::optional<Vec> rhs_raw(FlowKind kind, const Vec& y) {
  Vec out;
  switch (kind.family) {
    case FlowFamily::RicciRound: {
      if (y[0] == 0.0) return std::nullopt;
      out.resize(1);
      out[0] = -4.0 / y[0];
      break;
    }
    case FlowFamily::Dirac:
      out = vec2(y[1], -static_cast<double>(kind.k) * y[0]);
      break;
    case FlowFamily::RicciBerger: {
      const double a = y[0], b = y[1];
      if (b == 0.0) return std::nullopt;
      out = vec2(-8.0 * a * a / (b * b), 8.0 * a / b - 16.0);
      break;
    }
    case FlowFamily::NormalizedBerger: {
      const double a1 = y[0], a2 = y[1];
      if (a2 == 0.0) return std::nullopt;
      const double diff = a1 * a1 - a2 * a2;
      const double a2sq = a2 * a2;
      out = vec2(-16.0 / 3.0 * a1 / (a2sq * a2sq) * diff, 8.0 / 3.0 * diff / (a2sq * a2));
      break;
    }
    case FlowFamily::AsdEguchiHanson: {
      const double a1 = y[0], a2 = y[1];
      if (a2 == 0.0) return std::nullopt;
      out = vec2(2.0 - a1 * a1 / (a2 * a2), a1 / a2);
      break;
    }
    case FlowFamily::Flow9: {
      const double a1 = y[0], a2 = y[1];
      if (a1 == 0.0 || a2 == 0.0) return std::nullopt;
      const double a2sq = a2 * a2;
      const double ric11 = 4.0 * a1 * a1 / (a2sq * a2sq);
      const double ric22 = (4.0 / a2sq) * (2.0 - a1 * a1 / a2sq);
      const double root = std::sqrt(ric11);
      out = vec2(a1 * (ric22 / 2.0) / root, a2 * root / 2.0);
      break;
    }
    case FlowFamily::HitchinContact: {
      const double a1 = y[0], a2 = y[1];
      if (a2 == 0.0) return std::nullopt;
      const double da2 = a1 / a2;
      out = vec2((2.0 * a2 - a1 * da2) / a2, da2);
      break;
    }
  }
  if (!out.allFinite()) return std::nullopt;
  return out;
}

}  // namespace

std::string to_string(StopEvent::Reason reason) {
  switch (reason) {
    case StopEvent::Reason::ReachedTEnd: return "ReachedTEnd";
    case StopEvent::Reason::Collapse: return "Collapse";
    case StopEvent::Reason::DomainExit: return "DomainExit";
    case StopEvent::Reason::StepUnderflow: return "StepUnderflow";
  }
  return "?";
}

void IntegratorConfig::validate() const {
  if (!(step >= kStepFloor)) throw std::invalid_argument("IntegratorConfig: step must be >= 1e-12");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw std::invalid_argument("IntegratorConfig: tolerances must be positive");
  if (!(collapse_eps > 0.0))
    throw std::invalid_argument("IntegratorConfig: collapse_eps must be positive");
  if (!std::isfinite(t_end)) throw std::invalid_argument("IntegratorConfig: t_end must be finite");
  if (max_samples < 2) throw std::invalid_argument("IntegratorConfig: max_samples must be >= 2");
}

int state_dimension(FlowKind kind) {
  switch (kind.family) {
    case FlowFamily::RicciRound: return 1;
    default: return 2;
  }
}

std::vector<std::string> state_names(FlowKind kind) {
  switch (kind.family) {
    case FlowFamily::RicciRound: return {"f"};
    case FlowFamily::Dirac: return {"f", "df"};
    case FlowFamily::RicciBerger: return {"alpha", "beta"};
    default: return {"a1", "a2"};
  }
}

bool flow_state_valid(FlowKind kind, const Eigen::VectorXd& y, bool riemannian) {
  if (y.size() != state_dimension(kind) || !y.allFinite()) return false;
  if (kind.family == FlowFamily::Flow9)  // the flow is only defined there
    return y[0] > 0.0 && y[1] > 0.0 && y[0] * y[0] < 2.0 * y[1] * y[1];
  if (!riemannian) return true;
  switch (kind.family) {
    case FlowFamily::RicciRound: return y[0] > 0.0;
    case FlowFamily::Dirac: return true;
    case FlowFamily::RicciBerger: return y[0] >= 0.0 && y[1] > 0.0;
    case FlowFamily::NormalizedBerger: return y[0] > 0.0 && y[1] > 0.0;
    case FlowFamily::AsdEguchiHanson:
    case FlowFamily::HitchinContact: return y[0] >= 0.0 && y[1] > 0.0;
    default: return true;
  }
}

std::optional<Eigen::VectorXd> flow_rhs(FlowKind kind, const Eigen::VectorXd& y) {
  if (!flow_state_valid(kind, y, true)) return std::nullopt;
  return rhs_raw(kind, y);
}

std::vector<int> monitored_components(FlowKind kind) {
  switch (kind.family) {
    case FlowFamily::RicciRound:
    case FlowFamily::Dirac: return {0};
    default: return {0, 1};
  }
}

namespace {

// One RK4 step of size h; nullopt if a stage or the result leaves the
// admissible set.
std::optional<Vec> rk4_step(FlowKind kind, const Vec& y, double h, bool riemannian) {
  const auto k1 = rhs_raw(kind, y);
  if (!k1) return std::nullopt;
  const Vec y2 = y + (0.5 * h) * *k1;
  if (!flow_state_valid(kind, y2, riemannian)) return std::nullopt;
  const auto k2 = rhs_raw(kind, y2);
  if (!k2) return std::nullopt;
  const Vec y3 = y + (0.5 * h) * *k2;
  if (!flow_state_valid(kind, y3, riemannian)) return std::nullopt;
  const auto k3 = rhs_raw(kind, y3);
  if (!k3) return std::nullopt;
  const Vec y4 = y + h * *k3;
  if (!flow_state_valid(kind, y4, riemannian)) return std::nullopt;
  const auto k4 = rhs_raw(kind, y4);
  if (!k4) return std::nullopt;
  Vec out = y + (h / 6.0) * (*k1 + 2.0 * *k2 + 2.0 * *k3 + *k4);
  if (!flow_state_valid(kind, out, riemannian)) return std::nullopt;
  return out;
}

}  // namespace

Trajectory integrate(FlowKind kind, const FlowState& init, const IntegratorConfig& cfg) {
  cfg.validate();
  const int dim = state_dimension(kind);
  if (init.vars.size() != dim)
    throw std::invalid_argument("integrate: initial state has wrong dimension");
  if (!init.vars.allFinite())
    throw std::invalid_argument("integrate: initial state must be finite");
  if (!flow_state_valid(kind, init.vars, true))
    throw std::invalid_argument("integrate: initial state outside the flow domain");
  if (!(cfg.t_end > init.t))
    throw std::invalid_argument("integrate: t_end must exceed the initial time");

  const std::vector<int> monitored = monitored_components(kind);
  std::vector<bool> armed(monitored.size(), false);
  std::vector<double> scale(monitored.size(), 0.0);  // running max of each component
  const auto observe = [&](const Vec& y) {
    for (std::size_t i = 0; i < monitored.size(); ++i) {
      const double v = y[monitored[i]];
      if (v >= cfg.collapse_eps) armed[i] = true;
      scale[i] = std::max(scale[i], v);
    }
  };
  // First armed monitored component below the collapse threshold, -1 if none.
  const auto crossed = [&](const Vec& y) -> int {
    int comp = -1;
    double low = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < monitored.size(); ++i) {
      const double v = y[monitored[i]];
      if (armed[i] && v < cfg.collapse_eps && v < low) {
        low = v;
        comp = monitored[i];
      }
    }
    return comp;
  };

  Trajectory traj;
  traj.kind = kind;
  traj.samples.push_back(init);
  observe(init.vars);

  double t = init.t;
  Vec y = init.vars;
  double h = cfg.step;
  bool riemannian = true;
  const double t_tiny = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(cfg.t_end));
  const double bisect_width = std::max(cfg.step * 1e-4, 8.0 * t_tiny);

  // Probe P(lambda) = "step of size lambda stays admissible and above the
  // collapse threshold"; 0 pass, 1 below-threshold, 2 inadmissible.
  int below_comp = -1;
  const auto probe = [&](double lambda, Vec* out) -> int {
    auto r = rk4_step(kind, y, lambda, riemannian);
    if (!r) return 2;
    if (int c = crossed(*r); c >= 0) {
      below_comp = c;
      if (out) *out = *r;
      return 1;
    }
    if (out) *out = *r;
    return 0;
  };

  struct Event {
    double lambda_sample;  // last admissible step fraction (0 = none)
    Vec y_sample;
    double t_stop;
    StopEvent::Reason reason;
    int component;
  };
  // Bisect the boundary of P within (0, hi]; requires P(hi) known to fail
  // with failure mode hi_fail.
  const auto locate = [&](double hi, int hi_fail) -> Event {
    double lo = 0.0;
    Vec ylo = y;
    int last_fail = hi_fail;
    int fail_comp = below_comp;
    int iter = 0;
    while (hi - lo > bisect_width && iter++ < 300) {
      const double mid = 0.5 * (lo + hi);
      Vec ymid;
      const int f = probe(mid, &ymid);
      if (f == 0) {
        lo = mid;
        ylo = std::move(ymid);
      } else {
        hi = mid;
        last_fail = f;
        if (f == 1) fail_comp = below_comp;
      }
    }
    Event ev;
    ev.lambda_sample = lo;
    ev.y_sample = ylo;
    ev.t_stop = t + 0.5 * (lo + hi);
    if (last_fail == 1) {
      ev.reason = StopEvent::Reason::Collapse;
      ev.component = fail_comp;
      return ev;
    }
    // The admissibility cliff was hit before the threshold band could be
    // resolved.  Steeply collapsing components (f ~ sqrt near the singular
    // time) cross the whole band inside one bisection width, so classify by
    // proximity: a monitored component that has fallen to a small fraction
    // of its running scale is a collapse, anything else is a domain exit.
    ev.reason = StopEvent::Reason::DomainExit;
    ev.component = -1;
    if (!riemannian) return ev;  // already past a collapse; only exits remain
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < monitored.size(); ++i) {
      if (!armed[i]) continue;
      const double v = ylo[monitored[i]];
      const double threshold = std::max(2.0 * cfg.collapse_eps, 0.01 * scale[i]);
      if (v <= threshold && v < best) {
        best = v;
        ev.reason = StopEvent::Reason::Collapse;
        ev.component = monitored[i];
      }
    }
    return ev;
  };

  const auto finish = [&](const Event& ev) {
    if (ev.lambda_sample > 0.0) {
      traj.samples.push_back(FlowState{t + ev.lambda_sample, ev.y_sample});
    }
    traj.stop = StopEvent{ev.reason, ev.t_stop, ev.component};
  };

  while (true) {
    if (t >= cfg.t_end - t_tiny) {
      traj.stop = StopEvent{StopEvent::Reason::ReachedTEnd, t, -1};
      return traj;
    }
    if (traj.samples.size() >= cfg.max_samples)
      throw std::runtime_error("integrate: max_samples exhausted before t_end");

    const double h_try = std::min(h, cfg.t_end - t);
    auto full = rk4_step(kind, y, h_try, riemannian);
    bool accurate = true;
    double err_ratio = 0.0;
    Vec ynext;
    if (full) {
      if (cfg.adaptive) {
        auto half1 = rk4_step(kind, y, 0.5 * h_try, riemannian);
        std::optional<Vec> half2;
        if (half1) half2 = rk4_step(kind, *half1, 0.5 * h_try, riemannian);
        if (!half2) {
          full.reset();
        } else {
          for (int i = 0; i < dim; ++i) {
            const double err = std::abs((*half2)[i] - (*full)[i]);
            const double sc = cfg.abs_tol +
                              cfg.rel_tol * std::max(std::abs(y[i]), std::abs((*half2)[i]));
            err_ratio = std::max(err_ratio, err / sc);
          }
          accurate = err_ratio <= 1.0;
          if (accurate) {
            ynext = *half2 + (*half2 - *full) / 15.0;
            if (!flow_state_valid(kind, ynext, riemannian)) ynext = *half2;
          }
        }
      } else {
        ynext = *full;
      }
    }

    if (full && accurate) {
      const int comp = crossed(ynext);
      if (comp >= 0 && riemannian && !cfg.continue_past_collapse) {
        below_comp = comp;
        finish(locate(h_try, 1));
        return traj;
      }
      if (comp >= 0 && riemannian && cfg.continue_past_collapse) {
        riemannian = false;
        traj.nonriemannian_from = traj.samples.size();
      }
      t += h_try;
      y = std::move(ynext);
      traj.samples.push_back(FlowState{t, y});
      observe(y);
      if (cfg.adaptive && err_ratio < 1.0 / 32.0) h = std::min(2.0 * h, cfg.step);
      continue;
    }

    // The attempt failed: shrink if adaptivity still has room, otherwise
    // look for an event.
    if (cfg.adaptive && h_try > kStepFloor) {
      h = 0.5 * h_try;
      continue;
    }
    double window = h_try;
    if (cfg.adaptive) window = std::min(cfg.t_end - t, std::max(1e6 * kStepFloor, h_try));
    const int wf = probe(window, nullptr);
    if (wf == 0) {
      // nothing blocking within the probe window: a pure accuracy stall
      traj.stop = StopEvent{StopEvent::Reason::StepUnderflow, t, -1};
      return traj;
    }
    finish(locate(window, wf));
    return traj;
  }
}

}  // namespace coneflow
