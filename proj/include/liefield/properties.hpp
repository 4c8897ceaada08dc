// liefield: vector-field path following on matrix Lie groups
//
// Seeded property suite: executable residuals for the distance-function
// properties the controller depends on, plus the closed-loop descent
// identity. Used by the `check` CLI command and the acceptance tests.

#pragma once

#include <cstdint>
#include <string>

#include "liefield/field.hpp"

namespace liefield {

struct PropertyResult {
  std::string name;
  int trials = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  bool skipped = false;
  std::string note;
};

/// Low-curvature open curve used by the gradient-based checks
/// (orthogonality, descent identity): a translation-dominant segment
/// through the origin, so finite-difference bias stays far below the
/// property tolerances.
DiscretizedCurve make_gradient_test_curve(GroupPtr group, int n_samples);

/// State offset from a mid-curve sample of the gradient test curve:
/// perpendicular translation distance in [min_dist, max_dist], small jitter
/// along the curve, optional rotation offset (rotating groups only).
GroupElement sample_offset_state(const DiscretizedCurve& curve,
                                 std::mt19937_64& rng, double min_dist,
                                 double max_dist, double max_rotation);

struct ProbeDraw {
  GroupElement state;
  CurveQueryResult query;
};

/// Draws offset states until one projects to an interior, unambiguous
/// minimizer. The first-order optimality condition behind the
/// orthogonality and descent identities holds only there; endpoint-clamped
/// projections on open curves sit outside its hypotheses.
ProbeDraw sample_interior_probe(const DiscretizedCurve& curve,
                                std::mt19937_64& rng, double min_dist,
                                double max_dist, double max_rotation);

/// Pair (V, W) whose relative transform V^-1 W has rotation angle uniform
/// in [0, max_relative_angle] and translation uniform in a unit cube.
std::pair<GroupElement, GroupElement> random_pair_with_angle(
    GroupPtr group, std::mt19937_64& rng, double max_relative_angle);

/// Runs every applicable property for the group and returns one result per
/// property. trials == 0 yields vacuous passes flagged in the note.
std::vector<PropertyResult> run_property_suite(GroupPtr group, int trials,
                                               std::uint64_t seed);

}  // namespace liefield
