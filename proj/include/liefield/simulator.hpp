// liefield: vector-field path following on matrix Lie groups
//
// Closed-loop integration of the controlled flow on the group, with trace
// logging and the position/orientation error decomposition for SE(3).

#pragma once

#include <cstdint>
#include <iosfwd>

#include "liefield/field.hpp"

namespace liefield {

struct SimulationConfig {
  double dt = 0.01;        // seconds
  double duration = 150.0; // seconds
  GroupElement initial_state;
  GainSchedule gains;
  std::string curve_ref;   // curve file path (informational once loaded)
  std::uint64_t seed = 0;  // reserved for perturbation-policy reproducibility
  double escape_magnitude = 1e-3;
  FieldOptions field;
};

struct TraceRow {
  double t = 0.0;
  Eigen::VectorXd state;  // H flattened row-major, n^2 values
  double s_star = 0.0;
  double distance = 0.0;
  double xi_n_norm = 0.0;
  double xi_t_norm = 0.0;
  double k_n = 0.0;
  double k_t = 0.0;
  double position_error = 0.0;     // meters, SE(3) only
  double orientation_error = 0.0;  // degrees, SE(3) only
  bool has_pose_errors = false;
  bool near_tie = false;
};

struct SimulationTrace {
  std::vector<TraceRow> rows;
  int escape_events = 0;
};

/// One control step: nearest-point query, field evaluation (or the escape
/// twist on a near tie), then an exact exponential step of length dt.
std::pair<GroupElement, FieldEvaluation> step(
    const GroupElement& h, const DiscretizedCurve& curve,
    const GainSchedule& gains, double dt, const FieldOptions& opts = {},
    double escape_magnitude = 1e-3);

/// Runs the closed loop for duration/dt steps, recording one row per step
/// (state sampled before stepping). Throws std::runtime_error("manifold
/// drift") if the state leaves the group beyond repair.
SimulationTrace run(const SimulationConfig& config,
                    const DiscretizedCurve& curve);

/// Position error |t - t*| and orientation error (rotation angle of
/// Q*^T Q, in degrees). Throws std::domain_error("errors undefined for this
/// group") off SE(3).
std::pair<double, double> pose_errors(const GroupElement& h,
                                      const GroupElement& h_star);

/// CSV with one header row and 17 significant digits, so identical runs
/// serialize byte-identically.
void write_trace_csv(const SimulationTrace& trace, std::ostream& out);

}  // namespace liefield
