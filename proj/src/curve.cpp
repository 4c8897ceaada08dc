#include "liefield/curve.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <limits>

#include "liefield/parallel.hpp"

namespace liefield {
namespace {

using json = nlohmann::json;

int resolve_workers(const SearchOptions& opts) {
  if (!opts.parallel) return 1;
  if (opts.workers > 0) return opts.workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 2;
}

// Fills d[i] = element-to-element distance from h to sample i over
// [begin, end). Specialized per group; walks the packed sample buffer so
// the hot loop stays allocation-free and cache-friendly.
void fill_distances(const DiscretizedCurve& curve, const GroupElement& h,
                    std::int64_t begin, std::int64_t end, double* d) {
  const int n = curve.group->matrix_order;
  switch (curve.group->kind) {
    case GroupKind::SE3: {
      const Eigen::Matrix4d h_inv = affine_inverse(*curve.group, h.matrix);
      for (std::int64_t i = begin; i < end; ++i) {
        const Eigen::Map<const Eigen::Matrix4d> s(curve.packed.data() +
                                                  16 * i);
        const Eigen::Matrix4d rel = h_inv * s;
        d[i] = distance_se3_matrices(rel);
      }
      break;
    }
    case GroupKind::SO3: {
      const Eigen::Matrix3d h_t = h.matrix.transpose();
      for (std::int64_t i = begin; i < end; ++i) {
        const Eigen::Map<const Eigen::Matrix3d> s(curve.packed.data() +
                                                  9 * i);
        d[i] = std::sqrt(2.0) * rotation_angle(h_t * s);
      }
      break;
    }
    case GroupKind::Translation: {
      const int m = n - 1;
      const Eigen::VectorXd t = h.matrix.col(n - 1).head(m);
      for (std::int64_t i = begin; i < end; ++i) {
        const Eigen::Map<const Eigen::VectorXd> s(curve.packed.data() + m * i,
                                                  m);
        d[i] = (s - t).norm();
      }
      break;
    }
  }
}

void pack_samples(DiscretizedCurve& curve) {
  const int n = curve.group->matrix_order;
  const auto& samples = curve.samples;
  switch (curve.group->kind) {
    case GroupKind::SE3:
    case GroupKind::SO3: {
      curve.packed.resize(samples.size() * n * n);
      for (std::size_t i = 0; i < samples.size(); ++i) {
        Eigen::Map<Matrix>(curve.packed.data() + i * n * n, n, n) =
            samples[i];
      }
      break;
    }
    case GroupKind::Translation: {
      const int m = n - 1;
      curve.packed.resize(samples.size() * m);
      for (std::size_t i = 0; i < samples.size(); ++i) {
        Eigen::Map<Eigen::VectorXd>(curve.packed.data() + i * m, m) =
            samples[i].col(n - 1).head(m);
      }
      break;
    }
  }
}

int ring_separation(int i, int j, int n, bool closed) {
  const int direct = std::abs(i - j);
  return closed ? std::min(direct, n - direct) : direct;
}

}  // namespace

double DiscretizedCurve::max_tangent_norm() const {
  double best = 0.0;
  for (const auto& t : tangents) best = std::max(best, t.norm());
  return best;
}

DiscretizedCurve build_curve(GroupPtr group, std::vector<Matrix> samples,
                             bool closed) {
  const int n = static_cast<int>(samples.size());
  if (n < 3) throw std::invalid_argument("curve needs at least 3 samples");
  for (const auto& s : samples) {
    if (!group->contains(s)) throw std::invalid_argument("off-group sample");
  }

  DiscretizedCurve curve;
  curve.group = std::move(group);
  curve.samples = std::move(samples);
  curve.closed = closed;
  curve.ds = closed ? 1.0 / n : 1.0 / (n - 1);

  curve.tangents.reserve(n);
  const auto& s = curve.samples;
  for (int i = 0; i < n; ++i) {
    Matrix derivative;
    if (closed) {
      const int prev = (i + n - 1) % n;
      const int next = (i + 1) % n;
      derivative = (s[next] - s[prev]) / (2.0 * curve.ds);
    } else if (i == 0) {
      // Second-order one-sided stencils: the first-order ones leave an
      // O(ds) symmetric residue that falls outside the algebra span.
      derivative = (-3.0 * s[0] + 4.0 * s[1] - s[2]) / (2.0 * curve.ds);
    } else if (i == n - 1) {
      derivative =
          (3.0 * s[n - 1] - 4.0 * s[n - 2] + s[n - 3]) / (2.0 * curve.ds);
    } else {
      derivative = (s[i + 1] - s[i - 1]) / (2.0 * curve.ds);
    }
    Twist xi =
        vee(*curve.group, derivative * affine_inverse(*curve.group, s[i]));
    if (xi.norm() <= 1e-9) {
      throw std::invalid_argument("improper parametrization");
    }
    curve.tangents.push_back(std::move(xi));
  }
  pack_samples(curve);
  return curve;
}

CurveQueryResult find_nearest(const DiscretizedCurve& curve,
                              const GroupElement& h,
                              const SearchOptions& opts) {
  const int n = curve.size();
  std::vector<double> d(n);

  const int workers = resolve_workers(opts);
  if (workers <= 1) {
    fill_distances(curve, h, 0, n, d.data());
  } else {
    WorkerPool::instance().run_chunks(
        n, workers, [&](int, std::int64_t begin, std::int64_t end) {
          fill_distances(curve, h, begin, end, d.data());
        });
  }

  // Argmin with lowest-index tie break; a strict < keeps the first hit.
  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (d[i] < d[best]) best = i;
  }

  CurveQueryResult result;
  result.s_star_index = best;
  result.s_star = curve.param_of(best);
  result.distance = d[best];

  // Near-tie scan: local minima within tie_tolerance of the optimum, at a
  // ring separation ruling out the flat neighborhood of the optimum itself.
  const int min_sep =
      opts.min_tie_separation > 0 ? opts.min_tie_separation : n / 20;
  const double cutoff = result.distance + opts.tie_tolerance;
  std::vector<int> tied;
  bool genuine_tie = false;
  for (int i = 0; i < n; ++i) {
    if (d[i] > cutoff) continue;
    const bool has_prev = curve.closed || i > 0;
    const bool has_next = curve.closed || i < n - 1;
    const double prev = has_prev ? d[(i + n - 1) % n] : d[i];
    const double next = has_next ? d[(i + 1) % n] : d[i];
    if (d[i] <= prev && d[i] <= next) {
      tied.push_back(i);
      if (ring_separation(i, best, n, curve.closed) > min_sep) {
        genuine_tie = true;
      }
    }
  }
  if (genuine_tie) {
    result.near_tie = true;
    result.tie_indices = std::move(tied);
  }

  if (opts.refine && n >= 3) {
    const bool has_prev = curve.closed || best > 0;
    const bool has_next = curve.closed || best < n - 1;
    if (has_prev && has_next) {
      const double dm = d[(best + n - 1) % n];
      const double dp = d[(best + 1) % n];
      const double denom = dm - 2.0 * d[best] + dp;
      if (denom > 0.0) {
        const double offset =
            std::clamp(0.5 * (dm - dp) / denom, -0.5, 0.5);
        double s = result.s_star + offset * curve.ds;
        if (curve.closed) {
          s = s - std::floor(s);
        } else {
          s = std::clamp(s, 0.0, 1.0);
        }
        result.s_star = s;
      }
    }
  }

  if (curve.group->kind == GroupKind::SE3) {
    const Eigen::Matrix4d rel =
        Eigen::Matrix4d(affine_inverse(*curve.group, h.matrix)) *
        Eigen::Map<const Eigen::Matrix4d>(curve.samples[best].data());
    DistanceDiagnostics diag;
    distance_se3_matrices(rel, &diag);
    result.boundary = diag.branch == DistanceDiagnostics::Branch::Boundary;
  }
  return result;
}

double min_tie_distance(const DiscretizedCurve& curve,
                        const std::vector<GroupElement>& probes,
                        const SearchOptions& opts) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& probe : probes) {
    const CurveQueryResult q = find_nearest(curve, probe, opts);
    if (q.near_tie) best = std::min(best, q.distance);
  }
  return best;
}

double min_nonadjacent_distance(const DiscretizedCurve& curve) {
  const int n = curve.size();
  // Strided probe: cap the pair count so generation-time validation stays
  // cheap at N = 5000.
  const int stride = std::max(1, n / 800);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; i += stride) {
    for (int j = i + stride; j < n; j += stride) {
      const int sep = curve.closed ? std::min(j - i, n - (j - i)) : j - i;
      if (sep <= 2 * stride) continue;
      best = std::min(best,
                      element_distance(curve.element(i), curve.element(j)));
    }
  }
  return best;
}

DiscretizedCurve load_curve(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open curve file: " + file.string());
  json j;
  in >> j;

  const std::string group_name = j.at("group").get<std::string>();
  GroupPtr group;
  if (group_name == "SE3") {
    group = GroupDescriptor::se3();
  } else if (group_name == "SO3") {
    group = GroupDescriptor::so3();
  } else if (group_name == "T") {
    group = GroupDescriptor::translation(j.at("m").get<int>());
  } else {
    throw std::runtime_error("unknown group in curve file: " + group_name);
  }

  const int n = group->matrix_order;
  std::vector<Matrix> samples;
  for (const auto& row : j.at("samples")) {
    if (static_cast<int>(row.size()) != n * n) {
      throw std::runtime_error("sample size mismatch in curve file");
    }
    Matrix m(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) m(r, c) = row[r * n + c].get<double>();
    }
    samples.push_back(std::move(m));
  }
  return build_curve(std::move(group), std::move(samples),
                     j.at("closed").get<bool>());
}

void save_curve(const DiscretizedCurve& curve,
                const std::filesystem::path& file) {
  json j;
  switch (curve.group->kind) {
    case GroupKind::SE3:
      j["group"] = "SE3";
      break;
    case GroupKind::SO3:
      j["group"] = "SO3";
      break;
    case GroupKind::Translation:
      j["group"] = "T";
      j["m"] = curve.group->algebra_dim;
      break;
  }
  j["closed"] = curve.closed;
  json samples = json::array();
  const int n = curve.group->matrix_order;
  for (const auto& s : curve.samples) {
    json row = json::array();
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) row.push_back(s(r, c));
    }
    samples.push_back(std::move(row));
  }
  j["samples"] = std::move(samples);

  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write curve file: " + file.string());
  out << j.dump() << "\n";
}

std::vector<Matrix> circle_t2(double radius, const Eigen::Vector2d& center,
                              int n) {
  std::vector<Matrix> samples;
  samples.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double phi = 2.0 * M_PI * static_cast<double>(i) / n;
    Matrix h = Matrix::Identity(3, 3);
    h(0, 2) = center.x() + radius * std::cos(phi);
    h(1, 2) = center.y() + radius * std::sin(phi);
    samples.push_back(std::move(h));
  }
  return samples;
}

std::vector<Matrix> screw_se3(const Twist& zeta, const Matrix& start, int n,
                              bool closed) {
  const auto group = GroupDescriptor::se3();
  const Matrix generator = hat(*group, zeta);
  std::vector<Matrix> samples;
  samples.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double s = closed ? static_cast<double>(i) / n
                            : static_cast<double>(i) / (n - 1);
    samples.push_back(mat_exp(generator * s) * start);
  }
  return samples;
}

std::vector<Matrix> composed_se3(const Twist& a, const Twist& b,
                                 const Matrix& start, int n) {
  const auto group = GroupDescriptor::se3();
  const Matrix ga = hat(*group, a);
  const Matrix gb = hat(*group, b);
  std::vector<Matrix> samples;
  samples.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double phi = 2.0 * M_PI * static_cast<double>(i) / n;
    samples.push_back(mat_exp(ga * std::sin(phi)) *
                      mat_exp(gb * (1.0 - std::cos(phi))) * start);
  }
  return samples;
}

}  // namespace liefield
