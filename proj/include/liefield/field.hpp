// liefield: vector-field path following on matrix Lie groups
//
// The path-following controller: convergence (normal) and traversal
// (tangent) twists, distance-scheduled gains, and the perturbation twist
// that escapes ambiguous nearest-point states.

#pragma once

#include "liefield/curve.hpp"

namespace liefield {

/// Gains k_N(D) = kn_scale * tanh(kn_rate * sqrt(D)) and
/// k_T(D) = kt_scale * (1 - tanh(kt_rate * sqrt(D))): k_N vanishes on the
/// curve and saturates far away, k_T stays positive everywhere.
struct GainSchedule {
  double kn_scale = 0.1;
  double kn_rate = 0.75;
  double kt_scale = 0.03;
  double kt_rate = 0.75;

  double kn(double distance) const {
    return kn_scale * std::tanh(kn_rate * std::sqrt(std::max(distance, 0.0)));
  }
  double kt(double distance) const {
    // 1 - tanh(x) written as 2/(exp(2x)+1): tanh saturates to 1.0 in
    // double precision near x ~ 19, which would zero the traversal gain.
    const double x = kt_rate * std::sqrt(std::max(distance, 0.0));
    return kt_scale * 2.0 / (std::exp(2.0 * x) + 1.0);
  }
};

struct FieldOptions {
  double on_curve_tolerance = 1e-4;  // below: normal term is zeroed
  double gradient_step = 1e-3;       // forward-difference step for xi_N
  SearchOptions search;
};

struct FieldEvaluation {
  Twist xi;    // k_N * xi_N + k_T * xi_T
  Twist xi_n;
  Twist xi_t;
  double k_n = 0.0;
  double k_t = 0.0;
  double distance = 0.0;
  double s_star = 0.0;
  bool near_tie = false;
};

/// Convergence twist: negative transpose of the directional gradient of
/// D(., H_d(s*)) at h. Throws std::domain_error("on curve") when the state
/// is within on_curve_tolerance and std::domain_error("ambiguous minimizer")
/// on a near tie.
Twist normal_component(const DiscretizedCurve& curve, const GroupElement& h,
                       const CurveQueryResult& query,
                       double gradient_step = 1e-3,
                       double on_curve_tolerance = 1e-4);

/// Traversal twist: the curve tangent at the nearest sample. Throws
/// std::domain_error("ambiguous minimizer") on a near tie.
Twist tangent_component(const DiscretizedCurve& curve,
                        const CurveQueryResult& query);

/// Combines both components with the gain schedule using a precomputed
/// nearest-point query. Within on_curve_tolerance the normal term is zero.
FieldEvaluation evaluate_field_at(const DiscretizedCurve& curve,
                                  const GroupElement& h,
                                  const CurveQueryResult& query,
                                  const GainSchedule& gains,
                                  const FieldOptions& opts = {});

/// Convenience wrapper: runs the nearest-point search, then evaluates.
FieldEvaluation evaluate_field(const DiscretizedCurve& curve,
                               const GroupElement& h, const GainSchedule& gains,
                               const FieldOptions& opts = {});

/// Perturbation twist for near-tie states: magnitude times the initial
/// twist of the interpolation path from h toward the lowest-index tied
/// minimizer. A small step along it strictly decreases the curve distance.
Twist escape_twist(const DiscretizedCurve& curve, const GroupElement& h,
                   const CurveQueryResult& query, double magnitude);

}  // namespace liefield
