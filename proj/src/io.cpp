#include "coneflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "coneflow/frame.hpp"

namespace coneflow {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string flow_cli_name(FlowKind kind) {
  switch (kind.family) {
    case FlowFamily::RicciRound: return "ricci";
    case FlowFamily::Dirac: return "dirac";
    case FlowFamily::RicciBerger: return "ricci2";
    case FlowFamily::NormalizedBerger: return "nricci2";
    case FlowFamily::AsdEguchiHanson: return "asd";
    case FlowFamily::Flow9: return "flow9";
    case FlowFamily::HitchinContact: return "hitchin";
  }
  return "?";
}

FlowKind flow_kind_from_cli_name(const std::string& name, int k) {
  if (name == "ricci") return FlowKind::ricci_round();
  if (name == "dirac") return FlowKind::dirac(k);
  if (name == "ricci2") return FlowKind::ricci_berger();
  if (name == "nricci2") return FlowKind::normalized_berger();
  if (name == "asd") return FlowKind::asd_eguchi_hanson();
  if (name == "flow9") return FlowKind::flow9();
  if (name == "hitchin") return FlowKind::hitchin_contact();
  throw std::invalid_argument("unknown flow '" + name +
                              "' (expected dirac, ricci, ricci2, nricci2, asd, flow9 or hitchin)");
}

namespace {

// Three-point first derivative at node `which` of the (possibly nonuniform)
// stencil t0 < t1 < t2.
double fd3(double t0, double t1, double t2, double f0, double f1, double f2, int which) {
  const double h1 = t1 - t0, h2 = t2 - t1;
  switch (which) {
    case 0:
      return -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * f0 + (h1 + h2) / (h1 * h2) * f1 -
             h1 / (h2 * (h1 + h2)) * f2;
    case 1:
      return -h2 / (h1 * (h1 + h2)) * f0 + (h2 - h1) / (h1 * h2) * f1 +
             h1 / (h2 * (h1 + h2)) * f2;
    default:
      return h2 / (h1 * (h1 + h2)) * f0 - (h1 + h2) / (h1 * h2) * f1 +
             (h1 + 2.0 * h2) / (h2 * (h1 + h2)) * f2;
  }
}

// Finite-difference time derivatives of every state component.
std::vector<Eigen::VectorXd> fd_rates(const Trajectory& traj) {
  const auto& s = traj.samples;
  const int dim = static_cast<int>(s.front().vars.size());
  std::vector<Eigen::VectorXd> rates(s.size(), Eigen::VectorXd::Zero(dim));
  if (s.size() < 3) {
    for (auto& r : rates) r.setConstant(std::numeric_limits<double>::quiet_NaN());
    return rates;
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::size_t lo = i == 0 ? 0 : (i + 1 == s.size() ? s.size() - 3 : i - 1);
    const int which = static_cast<int>(i - lo);
    for (int c = 0; c < dim; ++c)
      rates[i][c] = fd3(s[lo].t, s[lo + 1].t, s[lo + 2].t, s[lo].vars[c], s[lo + 1].vars[c],
                        s[lo + 2].vars[c], which);
  }
  return rates;
}

}  // namespace

std::vector<std::string> trajectory_columns(const Trajectory& traj) {
  std::vector<std::string> cols = {"t"};
  for (const std::string& n : state_names(traj.kind)) cols.push_back(n);
  switch (traj.kind.family) {
    case FlowFamily::Dirac: cols.push_back("constraint_residual"); break;
    case FlowFamily::RicciRound: cols.push_back("first_integral"); break;
    case FlowFamily::NormalizedBerger: cols.push_back("volume"); break;
    case FlowFamily::AsdEguchiHanson:
      cols.push_back("asd_res1");
      cols.push_back("asd_res2");
      break;
    case FlowFamily::HitchinContact:
      cols.push_back("hitchin_res1");
      cols.push_back("hitchin_res2");
      break;
    default: break;
  }
  if (traj.nonriemannian_from) cols.push_back("nonriemannian");
  return cols;
}

std::vector<std::vector<double>> trajectory_table(const Trajectory& traj) {
  const auto& s = traj.samples;
  std::vector<std::vector<double>> rows;
  rows.reserve(s.size());

  std::vector<Eigen::VectorXd> rates;
  const bool needs_rates = traj.kind.family == FlowFamily::AsdEguchiHanson ||
                           traj.kind.family == FlowFamily::HitchinContact;
  if (needs_rates) rates = fd_rates(traj);

  for (std::size_t i = 0; i < s.size(); ++i) {
    std::vector<double> row = {s[i].t};
    for (int c = 0; c < s[i].vars.size(); ++c) row.push_back(s[i].vars[c]);
    switch (traj.kind.family) {
      case FlowFamily::Dirac: {
        const double f = s[i].vars[0], df = s[i].vars[1];
        row.push_back(df * df + traj.kind.k * f * f - 1.0);
        break;
      }
      case FlowFamily::RicciRound:
        row.push_back(s[i].vars[0] * s[i].vars[0] + 8.0 * s[i].t);
        break;
      case FlowFamily::NormalizedBerger:
        row.push_back(s[i].vars[0] * s[i].vars[1] * s[i].vars[1]);
        break;
      case FlowFamily::AsdEguchiHanson: {
        // rho-form residuals on finite-difference jets; at the bolt a1 = 0
        // the rho-form is singular, report 0 there (the locus is on-shell).
        const double a1 = s[i].vars[0], a2 = s[i].vars[1];
        if (a1 > 0.0 && rates[i].allFinite()) {
          TwoParamJet<double> jet{a1, a2, rates[i][0], rates[i][1], {}, {}};
          const AsdResidual<double> r = asd_residual(jet);
          row.push_back(r.rho1);
          row.push_back(r.rho2);
        } else {
          row.push_back(0.0);
          row.push_back(0.0);
        }
        break;
      }
      case FlowFamily::HitchinContact: {
        const double a1 = s[i].vars[0], a2 = s[i].vars[1];
        if (a1 > 0.0 && rates[i].allFinite()) {
          const Vec3<double> r = hitchin_residuals(a1, a2, rates[i][0], rates[i][1]);
          row.push_back(r[0]);
          row.push_back(r[1]);
        } else {
          row.push_back(0.0);
          row.push_back(0.0);
        }
        break;
      }
      default: break;
    }
    if (traj.nonriemannian_from)
      row.push_back(i >= *traj.nonriemannian_from ? 1.0 : 0.0);
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string init_string(const Trajectory& traj) {
  const std::vector<std::string> names = state_names(traj.kind);
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ",";
    out += names[i] + "=" + format_g17(traj.samples.front().vars[static_cast<int>(i)]);
  }
  return out;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const IntegratorConfig& cfg) {
  os << "# flow = " << flow_cli_name(traj.kind);
  if (traj.kind.family == FlowFamily::Dirac) os << ", k = " << traj.kind.k;
  os << "\n";
  os << "# init = " << init_string(traj) << "\n";
  os << "# t_end = " << format_g17(cfg.t_end) << ", step = " << format_g17(cfg.step)
     << ", adaptive = " << (cfg.adaptive ? 1 : 0)
     << ", collapse_eps = " << format_g17(cfg.collapse_eps) << "\n";
  const auto cols = trajectory_columns(traj);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const auto& row : trajectory_table(traj)) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_g17(row[i]);
    os << "\n";
  }
  os << "# stop = " << to_string(traj.stop.reason);
  if (traj.stop.reason == StopEvent::Reason::Collapse && traj.stop.component >= 0)
    os << ", component = " << state_names(traj.kind)[traj.stop.component];
  os << ", t_stop = " << format_g17(traj.stop.t_stop) << "\n";
}

nlohmann::ordered_json stop_event_json(const StopEvent& stop) {
  nlohmann::ordered_json j;
  j["reason"] = to_string(stop.reason);
  j["component"] = stop.component;
  j["t_stop"] = stop.t_stop;
  return j;
}

nlohmann::ordered_json trajectory_json(const Trajectory& traj, const IntegratorConfig& cfg) {
  nlohmann::ordered_json j;
  j["flow"] = flow_cli_name(traj.kind);
  if (traj.kind.family == FlowFamily::Dirac) j["k"] = traj.kind.k;
  nlohmann::ordered_json init;
  const auto names = state_names(traj.kind);
  for (std::size_t i = 0; i < names.size(); ++i)
    init[names[i]] = traj.samples.front().vars[static_cast<int>(i)];
  j["init"] = init;
  j["config"] = {{"t_end", cfg.t_end},
                 {"step", cfg.step},
                 {"adaptive", cfg.adaptive},
                 {"rel_tol", cfg.rel_tol},
                 {"abs_tol", cfg.abs_tol},
                 {"collapse_eps", cfg.collapse_eps}};
  j["stop"] = stop_event_json(traj.stop);
  j["columns"] = trajectory_columns(traj);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : trajectory_table(traj)) rows.push_back(row);
  j["samples"] = rows;
  return j;
}

}  // namespace coneflow
