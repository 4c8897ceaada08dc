#include "liefield/field.hpp"

namespace liefield {

Twist normal_component(const DiscretizedCurve& curve, const GroupElement& h,
                       const CurveQueryResult& query, double gradient_step,
                       double on_curve_tolerance) {
  if (query.near_tie) throw std::domain_error("ambiguous minimizer");
  if (query.distance <= on_curve_tolerance) {
    throw std::domain_error("on curve");
  }
  const GroupElement nearest = curve.element(query.s_star_index);
  const auto objective = [&nearest](const GroupElement& v) {
    return element_distance(v, nearest);
  };
  // The forward difference probes at distance ~step from the state; once
  // the step exceeds the distance to the curve the quotient degenerates to
  // a constant diagonal direction and the closed loop stalls near
  // D ~ step. Capping the step at a fraction of D keeps the direction
  // sound all the way down; at distances above 10*gradient_step the
  // configured step is used unchanged.
  const double step =
      std::min(gradient_step, std::max(query.distance / 10.0, 1e-7));
  return -group_gradient(*curve.group, objective, h, step).transpose();
}

Twist tangent_component(const DiscretizedCurve& curve,
                        const CurveQueryResult& query) {
  if (query.near_tie) throw std::domain_error("ambiguous minimizer");
  return curve.tangents[query.s_star_index];
}

FieldEvaluation evaluate_field_at(const DiscretizedCurve& curve,
                                  const GroupElement& h,
                                  const CurveQueryResult& query,
                                  const GainSchedule& gains,
                                  const FieldOptions& opts) {
  if (query.near_tie) throw std::domain_error("ambiguous minimizer");

  FieldEvaluation eval;
  eval.distance = query.distance;
  eval.s_star = query.s_star;
  eval.k_n = gains.kn(query.distance);
  eval.k_t = gains.kt(query.distance);
  eval.xi_t = tangent_component(curve, query);

  if (query.distance <= opts.on_curve_tolerance) {
    // k_N * xi_N vanishes on the curve even though xi_N alone is undefined.
    eval.xi_n = Twist::Zero(curve.group->algebra_dim);
  } else {
    eval.xi_n = normal_component(curve, h, query, opts.gradient_step,
                                 opts.on_curve_tolerance);
  }
  eval.xi = eval.k_n * eval.xi_n + eval.k_t * eval.xi_t;
  return eval;
}

FieldEvaluation evaluate_field(const DiscretizedCurve& curve,
                               const GroupElement& h, const GainSchedule& gains,
                               const FieldOptions& opts) {
  return evaluate_field_at(curve, h, find_nearest(curve, h, opts.search),
                           gains, opts);
}

Twist escape_twist(const DiscretizedCurve& curve, const GroupElement& h,
                   const CurveQueryResult& query, double magnitude) {
  if (magnitude == 0.0) return Twist::Zero(curve.group->algebra_dim);
  const int target = query.tie_indices.empty() ? query.s_star_index
                                               : query.tie_indices.front();
  const GroupElement goal = curve.element(target);
  const auto path = [&](double sigma) { return interpolate(sigma, h, goal); };
  return magnitude * path_twist(*curve.group, path, 0.0, 1e-5);
}

}  // namespace liefield
