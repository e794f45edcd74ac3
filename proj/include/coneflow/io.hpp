#pragma once

// Deterministic trajectory serialization.  CSV files carry `#`-prefixed
// metadata lines (flow, init, config), a header row, data rows and a final
// `#` footer with the stop event; JSON mirrors the same fields with stable
// key order.  Floats are printed with 17 significant digits so identical
// runs produce byte-identical files and values round-trip exactly.

#include <nlohmann/json.hpp>

#include <ostream>
#include <string>
#include <vector>

#include "coneflow/integrate.hpp"

namespace coneflow {

/// Shortest-not-lossy fixed formatting: printf "%.17g".
std::string format_g17(double x);

/// Command-line name of a flow kind (dirac, ricci, ricci2, nricci2, asd,
/// flow9, hitchin).
std::string flow_cli_name(FlowKind kind);
FlowKind flow_kind_from_cli_name(const std::string& name, int k);

/// Column names of the trajectory table: t, the state components, then the
/// flow's diagnostic columns (constraint residual for dirac, first integral
/// for ricci, volume for nricci2, finite-difference anti-self-duality or
/// contact residuals for asd/hitchin).
std::vector<std::string> trajectory_columns(const Trajectory& traj);

/// Full trajectory table, one row per sample, matching trajectory_columns.
std::vector<std::vector<double>> trajectory_table(const Trajectory& traj);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const IntegratorConfig& cfg);
nlohmann::ordered_json trajectory_json(const Trajectory& traj, const IntegratorConfig& cfg);

nlohmann::ordered_json stop_event_json(const StopEvent& stop);

}  // namespace coneflow
