#pragma once

// Classical 4th-order integration of the flow systems in flows.hpp with
// collapse detection.  Stepping is fixed-size by default; the adaptive mode
// halves the step until the full-step / two-half-step discrepancy meets the
// tolerances (the accepted state is the Richardson combination) and never
// exceeds the configured step, so adjacent sample spacing is bounded by it.
//
// Stopping: the horizon t_end, collapse of a monitored metric component
// below collapse_eps, exit from the flow's domain, or step underflow.
// Collapse and domain boundaries are located by bisection on the step
// fraction.  A monitored component must first reach collapse_eps before it
// can trigger a collapse, so initial data on a collapsed locus (the cone tip
// f = 0, the bolt alpha = 0) integrate through it.

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "coneflow/flows.hpp"

namespace coneflow {

struct FlowState {
  double t = 0.0;
  Eigen::VectorXd vars;
};

struct StopEvent {
  enum class Reason { ReachedTEnd, Collapse, DomainExit, StepUnderflow };
  Reason reason = Reason::ReachedTEnd;
  double t_stop = 0.0;
  int component = -1;  // collapsed component index, -1 otherwise
};

std::string to_string(StopEvent::Reason reason);

struct Trajectory {
  FlowKind kind;
  std::vector<FlowState> samples;
  StopEvent stop;
  /// Index of the first sample past a collapse when integration continues
  /// through it (diagnostic mode only).
  std::optional<std::size_t> nonriemannian_from;
};

struct IntegratorConfig {
  double step = 1e-3;          // fixed step size; maximum step when adaptive
  bool adaptive = false;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double t_end = 1.0;
  double collapse_eps = 1e-6;
  std::size_t max_samples = 2'000'000;
  bool continue_past_collapse = false;

  void validate() const;
};

/// State vector layout per flow kind.
int state_dimension(FlowKind kind);
std::vector<std::string> state_names(FlowKind kind);

/// Unchecked right-hand side; nullopt when the state is outside the flow's
/// domain or the result is not finite.
std::optional<Eigen::VectorXd> flow_rhs(FlowKind kind, const Eigen::VectorXd& y);

/// True when y is a legal state for the flow.  With riemannian = false the
/// positivity requirements are dropped (used past a collapse in the
/// diagnostic continuation mode); finiteness is always required.
bool flow_state_valid(FlowKind kind, const Eigen::VectorXd& y, bool riemannian = true);

/// Indices of the metric-scale components watched for collapse.
std::vector<int> monitored_components(FlowKind kind);

Trajectory integrate(FlowKind kind, const FlowState& init, const IntegratorConfig& cfg);

}  // namespace coneflow
