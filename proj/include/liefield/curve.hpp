// liefield: vector-field path following on matrix Lie groups
//
// Discretized target curves H_d(s), their tangent twists, and the
// brute-force element-to-curve distance search with near-tie detection.

#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "liefield/distance.hpp"
#include "liefield/group.hpp"

namespace liefield {

struct DiscretizedCurve {
  GroupPtr group;
  std::vector<Matrix> samples;  // H_d(s_i), i = 0..N-1
  bool closed = true;
  std::vector<Twist> tangents;  // xi_d(s_i)
  double ds = 0.0;              // parameter spacing, s in [0, 1]
  // Contiguous copy of the sample data for the search kernel: full
  // matrices (column-major) on SE(3)/SO(3), translation vectors on T(m).
  std::vector<double> packed;

  int size() const { return static_cast<int>(samples.size()); }
  double param_of(int i) const { return static_cast<double>(i) * ds; }
  GroupElement element(int i) const { return {group, samples[i]}; }
  /// Largest tangent-twist norm along the curve.
  double max_tangent_norm() const;
};

struct SearchOptions {
  bool parallel = false;
  int workers = 0;              // 0 -> hardware concurrency
  double tie_tolerance = 1e-6;  // absolute slack for tied minima
  int min_tie_separation = 0;   // 0 -> N / 20
  bool refine = false;          // 3-point parabolic refinement of s_star
};

struct CurveQueryResult {
  int s_star_index = 0;
  double s_star = 0.0;
  double distance = 0.0;
  bool near_tie = false;
  std::vector<int> tie_indices;  // tied local minima (ascending), empty
                                 // unless near_tie
  bool boundary = false;         // SE(3): rotation angle at the minimizer
                                 // within kBoundaryAngleMargin of pi
};

/// Builds a curve from on-group samples; tangents come from central finite
/// differences (one-sided at open endpoints). Throws std::invalid_argument
/// with "off-group sample" or "improper parametrization".
DiscretizedCurve build_curve(GroupPtr group, std::vector<Matrix> samples,
                             bool closed);

/// Exhaustive nearest-sample search. Ties break to the lowest index;
/// near_tie flags a second local minimum within tie_tolerance at index
/// separation above min_tie_separation. The parallel path partitions
/// indices across workers and is bit-identical to the serial path.
CurveQueryResult find_nearest(const DiscretizedCurve& curve,
                              const GroupElement& h,
                              const SearchOptions& opts = {});

/// Empirical lower bound on the distance from the ambiguous set: minimum
/// distance among the probes flagged near_tie; +infinity when none qualify.
double min_tie_distance(const DiscretizedCurve& curve,
                        const std::vector<GroupElement>& probes,
                        const SearchOptions& opts = {});

/// Minimum pairwise distance between non-adjacent samples (self-intersection
/// probe; quadratic, meant for generation-time validation).
double min_nonadjacent_distance(const DiscretizedCurve& curve);

// --- JSON file format ------------------------------------------------------
// {"group": "SE3" | "SO3" | "T", "m": <int, T only>, "closed": <bool>,
//  "samples": [[row-major n*n values], ...]}

DiscretizedCurve load_curve(const std::filesystem::path& file);
void save_curve(const DiscretizedCurve& curve,
                const std::filesystem::path& file);

// --- Generators -------------------------------------------------------------

/// Circle of the given radius/center on T(2), sampled at n points, closed.
std::vector<Matrix> circle_t2(double radius, const Eigen::Vector2d& center,
                              int n);

/// Constant-twist curve exp(hat(zeta) * s) * start; closed when the twist
/// flow is 1-periodic (e.g. a full-turn rotation).
std::vector<Matrix> screw_se3(const Twist& zeta, const Matrix& start, int n,
                              bool closed);

/// Smooth closed SE(3) curve from two composed screw oscillations:
/// H(s) = exp(A sin(2 pi s)) * exp(B (1 - cos(2 pi s))) * start.
std::vector<Matrix> composed_se3(const Twist& a, const Twist& b,
                                 const Matrix& start, int n);

}  // namespace liefield
