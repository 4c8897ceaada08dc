#include "liefield/simulator.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace liefield {
namespace {

Eigen::VectorXd flatten_row_major(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  Eigen::VectorXd flat(n * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) flat[r * n + c] = m(r, c);
  }
  return flat;
}

TraceRow make_row(double t, const GroupElement& h,
                  const DiscretizedCurve& curve, const FieldEvaluation& eval) {
  TraceRow row;
  row.t = t;
  row.state = flatten_row_major(h.matrix);
  row.s_star = eval.s_star;
  row.distance = eval.distance;
  row.xi_n_norm = eval.xi_n.size() ? eval.xi_n.norm() : 0.0;
  row.xi_t_norm = eval.xi_t.size() ? eval.xi_t.norm() : 0.0;
  row.k_n = eval.k_n;
  row.k_t = eval.k_t;
  row.near_tie = eval.near_tie;
  if (curve.group->kind == GroupKind::SE3) {
    const auto [pos, ori] =
        pose_errors(h, curve.element(
                           static_cast<int>(std::llround(
                               eval.s_star / curve.ds)) %
                           curve.size()));
    row.position_error = pos;
    row.orientation_error = ori;
    row.has_pose_errors = true;
  }
  return row;
}

}  // namespace

std::pair<GroupElement, FieldEvaluation> step(const GroupElement& h,
                                              const DiscretizedCurve& curve,
                                              const GainSchedule& gains,
                                              double dt,
                                              const FieldOptions& opts,
                                              double escape_magnitude) {
  const CurveQueryResult query = find_nearest(curve, h, opts.search);
  FieldEvaluation eval;
  if (query.near_tie) {
    eval.xi = escape_twist(curve, h, query, escape_magnitude);
    eval.xi_n = Twist::Zero(curve.group->algebra_dim);
    eval.xi_t = Twist::Zero(curve.group->algebra_dim);
    eval.distance = query.distance;
    eval.s_star = query.s_star;
    eval.near_tie = true;
  } else {
    eval = evaluate_field_at(curve, h, query, gains, opts);
  }
  return {exp_step(h, eval.xi, dt), eval};
}

SimulationTrace run(const SimulationConfig& config,
                    const DiscretizedCurve& curve) {
  if (config.dt <= 0.0) throw std::invalid_argument("dt must be positive");

  const long steps =
      std::max<long>(1, std::lround(config.duration / config.dt));
  SimulationTrace trace;
  trace.rows.reserve(steps);

  GroupElement h = config.initial_state;
  for (long k = 0; k < steps; ++k) {
    if (curve.group->membership_residual(h.matrix) > 1e-6) {
      throw std::runtime_error("manifold drift");
    }
    const double t = static_cast<double>(k) * config.dt;
    auto [next, eval] =
        step(h, curve, config.gains, config.dt, config.field,
             config.escape_magnitude);
    if (eval.near_tie) ++trace.escape_events;
    trace.rows.push_back(make_row(t, h, curve, eval));
    h = std::move(next);
  }
  return trace;
}

std::pair<double, double> pose_errors(const GroupElement& h,
                                      const GroupElement& h_star) {
  if (h.group->kind != GroupKind::SE3) {
    throw std::domain_error("errors undefined for this group");
  }
  const Eigen::Vector3d t = h.matrix.topRightCorner<3, 1>();
  const Eigen::Vector3d t_star = h_star.matrix.topRightCorner<3, 1>();
  const Eigen::Matrix3d q = h.matrix.topLeftCorner<3, 3>();
  const Eigen::Matrix3d q_star = h_star.matrix.topLeftCorner<3, 3>();
  const double angle = rotation_angle(q_star.transpose() * q);
  return {(t - t_star).norm(), angle * 180.0 / M_PI};
}

void write_trace_csv(const SimulationTrace& trace, std::ostream& out) {
  if (trace.rows.empty()) return;
  const int n2 = static_cast<int>(trace.rows.front().state.size());

  out << "t";
  for (int i = 0; i < n2; ++i) out << ",h" << i;
  out << ",s_star,D,xi_N_norm,xi_T_norm,kN,kT,"
         "position_error_m,orientation_error_deg,near_tie\n";

  char buf[32];
  const auto emit = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  };
  for (const auto& row : trace.rows) {
    emit(row.t);
    for (int i = 0; i < n2; ++i) {
      out << ',';
      emit(row.state[i]);
    }
    out << ',';
    emit(row.s_star);
    out << ',';
    emit(row.distance);
    out << ',';
    emit(row.xi_n_norm);
    out << ',';
    emit(row.xi_t_norm);
    out << ',';
    emit(row.k_n);
    out << ',';
    emit(row.k_t);
    out << ',';
    if (row.has_pose_errors) {
      emit(row.position_error);
      out << ',';
      emit(row.orientation_error);
    } else {
      out << ',';
    }
    out << ',' << (row.near_tie ? 1 : 0) << '\n';
  }
}

}  // namespace liefield
