#include "liefield/properties.hpp"

#include <cmath>

namespace liefield {
namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_translation(const GroupDescriptor& g) {
  return g.kind == GroupKind::Translation;
}

GroupElement random_pair_element(GroupPtr g, std::mt19937_64& rng) {
  // Rotation angle stays off the pi boundary so the principal logarithm
  // exists for every draw.
  return random_element(std::move(g), rng, 1.0, kPi - 1e-3);
}

PropertyResult vacuous(const std::string& name, double tolerance) {
  PropertyResult r;
  r.name = name;
  r.tolerance = tolerance;
  r.note = "0 trials, vacuous pass";
  return r;
}

}  // namespace

DiscretizedCurve make_gradient_test_curve(GroupPtr group, int n_samples) {
  const int m = group->algebra_dim;
  Twist zeta = Twist::Zero(m);
  switch (group->kind) {
    case GroupKind::Translation: {
      Eigen::VectorXd dir = Eigen::VectorXd::Zero(m);
      for (int k = 0; k < m; ++k) dir[k] = 1.0 / std::sqrt(double(k + 1));
      dir.normalize();
      zeta = 1.2 * dir;
      break;
    }
    case GroupKind::SE3: {
      // Translation-dominant segment; the tangent twist has no angular
      // part, which keeps the forward-difference bias of the normal
      // component decoupled from the state's position.
      Eigen::Vector3d dir(0.8, 0.36, 0.48);
      dir.normalize();
      zeta.head<3>() = 1.2 * dir;
      break;
    }
    case GroupKind::SO3:
      zeta[2] = 0.8;
      break;
  }

  Matrix start = Matrix::Identity(group->matrix_order, group->matrix_order);
  if (group->kind != GroupKind::SO3) {
    // Center the segment on the origin.
    const int n = group->matrix_order;
    start.col(n - 1).head(n - 1) = -0.5 * hat(*group, zeta)
                                              .col(n - 1)
                                              .head(n - 1);
  }

  const Matrix generator = hat(*group, zeta);
  std::vector<Matrix> samples;
  samples.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double s = static_cast<double>(i) / (n_samples - 1);
    samples.push_back(mat_exp(generator * s) * start);
  }
  return build_curve(std::move(group), std::move(samples), /*closed=*/false);
}

GroupElement sample_offset_state(const DiscretizedCurve& curve,
                                 std::mt19937_64& rng, double min_dist,
                                 double max_dist, double max_rotation) {
  const auto& g = *curve.group;
  const int n = g.matrix_order;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> dist_draw(min_dist, max_dist);
  std::uniform_int_distribution<int> mid(curve.size() / 3,
                                         2 * curve.size() / 3);

  const Matrix& base = curve.samples[mid(rng)];
  Matrix state = base;

  if (g.kind == GroupKind::SO3) {
    Eigen::Vector3d axis(unit(rng), unit(rng), unit(rng));
    axis.normalize();
    const double angle = dist_draw(rng) / std::sqrt(2.0);  // D = sqrt(2) angle
    state = Eigen::AngleAxisd(angle, axis).toRotationMatrix() * state;
    return {curve.group, state};
  }

  // Perpendicular translation offset relative to the segment direction.
  const Eigen::VectorXd dir =
      curve.tangents.front().head(n - 1).normalized();
  Eigen::VectorXd perp(n - 1);
  do {
    for (int k = 0; k < n - 1; ++k) perp[k] = unit(rng);
    perp -= perp.dot(dir) * dir;
  } while (perp.norm() < 1e-3);
  perp.normalize();

  state.col(n - 1).head(n - 1) +=
      dist_draw(rng) * perp + 0.2 * unit(rng) * dir;

  if (g.kind == GroupKind::SE3 && max_rotation > 0.0) {
    Eigen::Vector3d axis(unit(rng), unit(rng), unit(rng));
    axis.normalize();
    const double angle = 0.5 * (unit(rng) + 1.0) * max_rotation;
    state.topLeftCorner<3, 3>() =
        Eigen::AngleAxisd(angle, axis).toRotationMatrix() *
        state.topLeftCorner<3, 3>();
  }
  return {curve.group, state};
}

ProbeDraw sample_interior_probe(const DiscretizedCurve& curve,
                                std::mt19937_64& rng, double min_dist,
                                double max_dist, double max_rotation) {
  const int n = curve.size();
  const int margin = curve.closed ? 0 : n / 10;
  while (true) {
    GroupElement state =
        sample_offset_state(curve, rng, min_dist, max_dist, max_rotation);
    CurveQueryResult query = find_nearest(curve, state);
    if (query.near_tie) continue;
    if (!curve.closed && (query.s_star_index < margin ||
                          query.s_star_index >= n - margin)) {
      continue;
    }
    return {std::move(state), std::move(query)};
  }
}

std::pair<GroupElement, GroupElement> random_pair_with_angle(
    GroupPtr group, std::mt19937_64& rng, double max_relative_angle) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> angle_draw(0.0, max_relative_angle);
  const int n = group->matrix_order;

  GroupElement v = random_element(group, rng, 1.0, kPi);
  Matrix rel = Matrix::Identity(n, n);
  if (group->kind != GroupKind::Translation) {
    Eigen::Vector3d axis;
    do {
      axis = Eigen::Vector3d(unit(rng), unit(rng), unit(rng));
    } while (axis.norm() < 1e-6);
    axis.normalize();
    rel.topLeftCorner<3, 3>() =
        Eigen::AngleAxisd(angle_draw(rng), axis).toRotationMatrix();
  }
  if (group->kind != GroupKind::SO3) {
    for (int k = 0; k < n - 1; ++k) rel(k, n - 1) = unit(rng);
  }
  GroupElement w{group, v.matrix * rel};
  return {std::move(v), std::move(w)};
}

std::vector<PropertyResult> run_property_suite(GroupPtr group, int trials,
                                               std::uint64_t seed) {
  std::vector<PropertyResult> results;
  std::mt19937_64 rng(seed);
  const bool translation = is_translation(*group);

  const double left_inv_tol = translation ? 1e-12 : 1e-9;
  const double chain_tol = translation ? 1e-12 : 1e-8;

  if (trials <= 0) {
    results.push_back(vacuous("left_invariance", left_inv_tol));
    results.push_back(vacuous("chainability", chain_tol));
    results.push_back(vacuous("local_linearity", 1e-6));
    results.push_back(vacuous("log_exp_log", 1e-9));
    results.push_back(vacuous("orthogonality", 1e-4));
    results.push_back(vacuous("lyapunov_identity", 0.05));
    results.push_back(vacuous("oracle_equivalence", 1e-9));
    results.push_back(vacuous("chain_rule", 1e-3));
    return results;
  }

  std::uniform_real_distribution<double> unit01(0.0, 1.0);

  {
    PropertyResult r;
    r.name = "left_invariance";
    r.tolerance = left_inv_tol;
    r.trials = trials;
    for (int i = 0; i < trials; ++i) {
      const auto a = random_pair_element(group, rng);
      const auto v = random_pair_element(group, rng);
      const auto w = random_pair_element(group, rng);
      r.max_residual = std::max(r.max_residual,
                                left_invariance_residual(a, v, w));
    }
    r.pass = r.max_residual <= r.tolerance;
    results.push_back(std::move(r));
  }

  {
    PropertyResult r;
    r.name = "chainability";
    r.tolerance = chain_tol;
    r.trials = trials;
    for (int i = 0; i < trials; ++i) {
      const auto v = random_pair_element(group, rng);
      const auto w = random_pair_element(group, rng);
      r.max_residual = std::max(
          r.max_residual, chainability_residual(v, w, unit01(rng)));
    }
    r.pass = r.max_residual <= r.tolerance;
    results.push_back(std::move(r));
  }

  {
    PropertyResult r;
    r.name = "local_linearity";
    r.tolerance = 1e-6;
    r.trials = trials;
    const double sigmas[] = {1e-2, 1e-3, 1e-4};
    for (int i = 0; i < trials; ++i) {
      auto v = random_pair_element(group, rng);
      auto w = random_pair_element(group, rng);
      const double d = element_distance(v, w);
      if (d < 1e-3) {
        --i;
        continue;
      }
      r.max_residual =
          std::max(r.max_residual,
                   std::abs(local_linearity_ratio(v, w, sigmas) - d));
    }
    r.pass = r.max_residual <= r.tolerance;
    results.push_back(std::move(r));
  }

  {
    PropertyResult r;
    r.name = "log_exp_log";
    r.tolerance = 1e-9;
    r.trials = trials;
    for (int i = 0; i < trials; ++i) {
      const auto z = random_pair_element(group, rng);
      r.max_residual =
          std::max(r.max_residual, log_exp_log_residual(z, unit01(rng)));
    }
    r.pass = r.max_residual <= r.tolerance;
    results.push_back(std::move(r));
  }

  const bool gradient_checks =
      group->kind == GroupKind::SE3 || translation;
  DiscretizedCurve grad_curve;
  if (gradient_checks || group->kind == GroupKind::SO3) {
    grad_curve = make_gradient_test_curve(group, 2000);
  }

  {
    PropertyResult r;
    r.name = "orthogonality";
    r.tolerance = 1e-4;
    if (!gradient_checks) {
      r.skipped = true;
      r.note = "scoped to SE(3) and T(m) test curves";
    } else {
      r.trials = trials;
      for (int i = 0; i < trials; ++i) {
        const ProbeDraw probe =
            sample_interior_probe(grad_curve, rng, 10.0, 14.0, 1.0);
        const Twist xi_n =
            normal_component(grad_curve, probe.state, probe.query);
        const Twist xi_t = tangent_component(grad_curve, probe.query);
        r.max_residual =
            std::max(r.max_residual, std::abs(xi_n.dot(xi_t)) /
                                         (xi_n.norm() * xi_t.norm()));
      }
      r.pass = r.max_residual <= r.tolerance;
    }
    results.push_back(std::move(r));
  }

  {
    PropertyResult r;
    r.name = "lyapunov_identity";
    r.tolerance = 0.05;
    r.trials = trials;
    const GainSchedule gains;
    const FieldOptions opts;
    constexpr double kDelta = 1e-5;
    for (int i = 0; i < trials; ++i) {
      const ProbeDraw probe =
          sample_interior_probe(grad_curve, rng, 0.5, 3.0, 1.0);
      if (probe.query.distance <= 10.0 * opts.on_curve_tolerance) {
        --i;
        continue;
      }
      const FieldEvaluation eval = evaluate_field_at(
          grad_curve, probe.state, probe.query, gains, opts);
      const GroupElement next = exp_step(probe.state, eval.xi, kDelta);
      const double d_next = find_nearest(grad_curve, next).distance;
      const double measured = (d_next - probe.query.distance) / kDelta;
      const double claimed = -eval.k_n * eval.xi_n.squaredNorm();
      r.max_residual = std::max(
          r.max_residual, std::abs(measured - claimed) / std::abs(claimed));
    }
    r.pass = r.max_residual <= r.tolerance;
    results.push_back(std::move(r));
  }

  {
    PropertyResult r;
    r.name = "oracle_equivalence";
    r.tolerance = 1e-9;
    if (group->kind != GroupKind::SE3) {
      r.skipped = true;
      r.note = "closed-form kernel exists for SE(3) only";
    } else {
      r.trials = trials;
      for (int i = 0; i < trials; ++i) {
        const auto [v, w] = random_pair_with_angle(group, rng, kPi - 1e-3);
        const double closed = distance_se3(v, w).first;
        const double generic = distance_via_log(v, w);
        r.max_residual = std::max(
            r.max_residual, std::abs(closed - generic) / (1.0 + closed));
      }
      r.pass = r.max_residual <= r.tolerance;
    }
    results.push_back(std::move(r));
  }

  {
    PropertyResult r;
    r.name = "chain_rule";
    r.tolerance = 1e-3;  // residual over (1 + |d/dsigma f|)
    r.trials = trials;
    // SE(3) states stay near the origin and well away from w: the rotation
    // flows of the L operator pick up position-dependent curvature, and the
    // forward-difference bias scales with it over the distance.
    const bool se3 = group->kind == GroupKind::SE3;
    const double state_translation = se3 ? 0.3 : 1.0;
    const double min_distance = se3 ? 3.0 : 0.5;
    for (int i = 0; i < trials; ++i) {
      const auto h =
          random_element(group, rng, state_translation, kPi - 1e-3);
      auto w = random_pair_element(group, rng);
      if (element_distance(h, w) < min_distance) {
        --i;
        continue;
      }
      const Twist zeta = random_twist(*group, rng, 1.0);
      const Matrix generator = hat(*group, zeta);
      const auto path = [&](double sigma) {
        return GroupElement{group, mat_exp(generator * sigma) * h.matrix};
      };
      const auto f = [&w](const GroupElement& v) {
        return element_distance(v, w);
      };
      const double sigma0 = 0.1;
      constexpr double kH = 1e-6;
      const double lhs =
          (f(path(sigma0 + kH)) - f(path(sigma0 - kH))) / (2.0 * kH);
      const GroupElement at = path(sigma0);
      const double rhs = group_gradient(*group, f, at, 1e-3)
                             .dot(path_twist(*group, path, sigma0, 1e-6));
      r.max_residual = std::max(r.max_residual,
                                std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
    }
    r.pass = r.max_residual <= r.tolerance;
    results.push_back(std::move(r));
  }

  return results;
}

}  // namespace liefield
