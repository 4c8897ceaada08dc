// liefield command-line driver: simulate, check, gen-curve, field-grid,
// bench.
//
// Exit codes: 0 success, 2 manifold drift, 3 config error, 4 improper or
// degenerate generated curve.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "liefield/bench.hpp"
#include "liefield/properties.hpp"
#include "liefield/simulator.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace liefield;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDrift = 2;
constexpr int kExitConfig = 3;
constexpr int kExitImproper = 4;

int workers_from_env() {
  if (const char* env = std::getenv("FIELD_WORKERS")) {
    try {
      return std::max(0, std::stoi(env));
    } catch (...) {
      return 0;
    }
  }
  return 0;
}

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      throw std::runtime_error("unknown key '" + key + "' in " + where);
    }
  }
}

Matrix parse_matrix(const json& row, int n) {
  if (static_cast<int>(row.size()) != n * n) {
    throw std::runtime_error("initial_state has wrong size");
  }
  Matrix m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) m(r, c) = row[r * n + c].get<double>();
  }
  return m;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 int cli_workers, const std::string& parallel_flag) {
  SimulationConfig config;
  DiscretizedCurve curve;
  try {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config: " + config_path);
    json j;
    in >> j;
    reject_unknown_keys(
        j,
        {"curve", "dt", "duration", "initial_state", "gains", "seed",
         "escape_magnitude", "on_curve_tolerance", "gradient_step",
         "tie_tolerance", "parallel", "workers"},
        "config");

    const fs::path base = fs::path(config_path).parent_path();
    curve = load_curve(base / j.at("curve").get<std::string>());
    config.curve_ref = j.at("curve").get<std::string>();
    config.dt = j.value("dt", 0.01);
    config.duration = j.value("duration", 150.0);
    config.seed = j.value("seed", std::uint64_t{0});
    config.escape_magnitude = j.value("escape_magnitude", 1e-3);
    config.field.on_curve_tolerance = j.value("on_curve_tolerance", 1e-4);
    config.field.gradient_step = j.value("gradient_step", 1e-3);
    config.field.search.tie_tolerance = j.value("tie_tolerance", 1e-6);
    config.field.search.parallel = j.value("parallel", false);
    config.field.search.workers = j.value("workers", 0);
    if (parallel_flag == "on") config.field.search.parallel = true;
    if (parallel_flag == "off") config.field.search.parallel = false;
    if (cli_workers > 0) config.field.search.workers = cli_workers;

    if (j.contains("gains")) {
      const json& g = j["gains"];
      reject_unknown_keys(g, {"kn_scale", "kn_rate", "kt_scale", "kt_rate"},
                          "gains");
      config.gains.kn_scale = g.value("kn_scale", 0.1);
      config.gains.kn_rate = g.value("kn_rate", 0.75);
      config.gains.kt_scale = g.value("kt_scale", 0.03);
      config.gains.kt_rate = g.value("kt_rate", 0.75);
    }

    const int n = curve.group->matrix_order;
    if (j.contains("initial_state")) {
      Matrix h = parse_matrix(j["initial_state"], n);
      if (!curve.group->contains(h, 1e-6)) {
        throw std::runtime_error("initial_state is not on the group");
      }
      config.initial_state = {curve.group, std::move(h)};
    } else {
      config.initial_state = curve.element(0);
    }
    if (config.dt <= 0.0 || config.duration < 0.0) {
      throw std::runtime_error("dt must be positive and duration >= 0");
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const SimulationTrace trace = run(config, curve);
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "config error: cannot write " << out_path << "\n";
      return kExitConfig;
    }
    write_trace_csv(trace, out);
    std::cerr << "wrote " << trace.rows.size() << " rows, "
              << trace.escape_events << " escape events, final D = "
              << trace.rows.back().distance << "\n";
    return kExitOk;
  } catch (const std::runtime_error& e) {
    std::cerr << "simulation aborted: " << e.what() << "\n";
    return kExitDrift;
  }
}

int cmd_check(const std::string& group_name, int trials,
              std::uint64_t seed) {
  GroupPtr group;
  try {
    group = GroupDescriptor::by_name(group_name);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (trials == 0) {
    std::cerr << "warning: 0 trials requested, all properties pass "
                 "vacuously\n";
  }
  const auto results = run_property_suite(group, trials, seed);
  bool all_pass = true;
  std::printf("%-20s %8s %14s %12s  %s\n", "property", "trials",
              "max residual", "tolerance", "status");
  for (const auto& r : results) {
    if (r.skipped) {
      std::printf("%-20s %8s %14s %12s  skipped (%s)\n", r.name.c_str(), "-",
                  "-", "-", r.note.c_str());
      continue;
    }
    std::printf("%-20s %8d %14.3e %12.1e  %s\n", r.name.c_str(), r.trials,
                r.max_residual, r.tolerance, r.pass ? "pass" : "FAIL");
    all_pass = all_pass && r.pass;
  }
  return all_pass ? kExitOk : 1;
}

int cmd_gen_curve(const std::string& kind, int n,
                  const std::vector<double>& zeta_override,
                  const std::string& out) {
  try {
    DiscretizedCurve curve;
    if (kind == "circle_T2") {
      curve = build_curve(GroupDescriptor::translation(2),
                          circle_t2(1.0, {0.0, 0.0}, n), /*closed=*/true);
    } else if (kind == "screw_SE3") {
      Twist zeta(6);
      zeta << 0.0, 0.0, 0.1, 0.0, 0.0, 2.0 * M_PI;
      if (!zeta_override.empty()) {
        if (zeta_override.size() != 6) {
          throw std::runtime_error("--zeta needs 6 values");
        }
        for (int k = 0; k < 6; ++k) zeta[k] = zeta_override[k];
      }
      Matrix start = Matrix::Identity(4, 4);
      start(0, 3) = 0.5;
      curve = build_curve(GroupDescriptor::se3(),
                          screw_se3(zeta, start, n, /*closed=*/true),
                          /*closed=*/true);
    } else if (kind == "composed_SE3") {
      Twist a(6), b(6);
      a << 0.3, 0.0, 0.2, 0.0, 0.8, 0.0;
      b << 0.0, 0.25, 0.0, 0.7, 0.0, 0.9;
      Matrix start = Matrix::Identity(4, 4);
      start(0, 3) = 0.4;
      start(1, 3) = -0.2;
      curve = build_curve(GroupDescriptor::se3(), composed_se3(a, b, start, n),
                          /*closed=*/true);
    } else {
      std::cerr << "config error: unknown curve kind '" << kind << "'\n";
      return kExitConfig;
    }
    if (min_nonadjacent_distance(curve) <= 1e-9) {
      std::cerr << "curve generation failed: self-intersecting at desk "
                   "scale\n";
      return kExitImproper;
    }
    save_curve(curve, out);
    std::cerr << "wrote " << curve.size() << " samples to " << out << "\n";
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    std::cerr << "curve generation failed: " << e.what() << "\n";
    return kExitImproper;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int cmd_field_grid(const std::string& curve_path, const std::string& out_path,
                   int resolution, double extent) {
  try {
    const DiscretizedCurve curve = load_curve(curve_path);
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);

    const GainSchedule gains;
    const FieldOptions opts;
    const int m = curve.group->algebra_dim;

    out << "i,j";
    for (int k = 0; k < curve.group->matrix_order - 1; ++k)
      out << ",x" << k;
    out << ",D,s_star,near_tie";
    for (int k = 0; k < m; ++k) out << ",psi" << k;
    for (int k = 0; k < m; ++k) out << ",xi_N" << k;
    for (int k = 0; k < m; ++k) out << ",xi_T" << k;
    out << "\n";

    // Grid over the first two translation coordinates, centered on the
    // curve's mean position; remaining coordinates follow sample 0.
    const int n = curve.group->matrix_order;
    Eigen::VectorXd center = Eigen::VectorXd::Zero(n - 1);
    for (const auto& s : curve.samples) {
      center += s.col(n - 1).head(n - 1);
    }
    center /= curve.size();

    for (int i = 0; i < resolution; ++i) {
      for (int j = 0; j < resolution; ++j) {
        Matrix h = curve.samples[0];
        h.col(n - 1).head(n - 1) = center;
        h(0, n - 1) +=
            extent * (2.0 * i / std::max(1, resolution - 1) - 1.0);
        h(1, n - 1) +=
            extent * (2.0 * j / std::max(1, resolution - 1) - 1.0);
        const GroupElement state{curve.group, h};

        const CurveQueryResult q = find_nearest(curve, state, opts.search);
        out << i << ',' << j;
        for (int k = 0; k < n - 1; ++k) out << ',' << h(k, n - 1);
        out << ',' << q.distance << ',' << q.s_star << ','
            << (q.near_tie ? 1 : 0);
        if (q.near_tie) {
          // Flagged, not fatal: no field components at ambiguous states.
          for (int k = 0; k < 3 * m; ++k) out << ',';
          out << "\n";
          continue;
        }
        const FieldEvaluation eval =
            evaluate_field_at(curve, state, q, gains, opts);
        for (int k = 0; k < m; ++k) out << ',' << eval.xi[k];
        for (int k = 0; k < m; ++k) out << ',' << eval.xi_n[k];
        for (int k = 0; k < m; ++k) out << ',' << eval.xi_t[k];
        out << "\n";
      }
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int cmd_bench(const std::string& curve_path, int trials, std::uint64_t seed,
              const std::string& out_path) {
  try {
    DiscretizedCurve curve;
    if (curve_path.empty()) {
      Twist zeta(6);
      zeta << 0.0, 0.0, 0.1, 0.0, 0.0, 2.0 * M_PI;
      Matrix start = Matrix::Identity(4, 4);
      start(0, 3) = 0.5;
      curve = build_curve(GroupDescriptor::se3(),
                          screw_se3(zeta, start, 5000, true), true);
    } else {
      curve = load_curve(curve_path);
    }

    const BenchReport field_report =
        bench_field_eval(curve, trials, {1, 2, 4, 8}, seed);
    const KernelBenchReport kernel_report =
        bench_distance_kernels(trials, seed);

    print_table(field_report, std::cout);
    print_table(kernel_report, std::cout);

    if (!out_path.empty()) {
      std::ofstream out(out_path);
      out << "{\n\"field\": " << to_json(field_report)
          << ",\n\"kernels\": " << to_json(kernel_report) << "\n}\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vector-field path following on matrix Lie groups"};
  app.require_subcommand(1);

  std::string config_path, out_path, group_name = "SE3", kind, curve_path;
  int trials = 1000;
  int workers = workers_from_env();
  int resolution = 10;
  int samples = 360;
  double extent = 2.0;
  std::uint64_t seed = 0;
  std::string parallel_flag;

  auto* simulate = app.add_subcommand("simulate", "run the closed loop");
  simulate->add_option("--config", config_path, "JSON config file")
      ->required();
  simulate->add_option("--out", out_path, "trace CSV output")->required();
  simulate->add_option("--workers", workers, "search worker count");
  simulate->add_option("--parallel", parallel_flag, "on|off")
      ->check(CLI::IsMember({"on", "off"}));

  auto* check = app.add_subcommand("check", "run the property suite");
  check->add_option("--group", group_name, "T(m) | SO3 | SE3");
  check->add_option("--trials", trials, "trials per property");
  check->add_option("--seed", seed, "RNG seed");

  std::vector<double> zeta_override;
  auto* gen = app.add_subcommand("gen-curve", "generate a sample curve");
  gen->add_option("--kind", kind, "circle_T2 | screw_SE3 | composed_SE3")
      ->required();
  gen->add_option("--samples", samples, "sample count");
  gen->add_option("--zeta", zeta_override,
                  "screw twist override, 6 comma-separated values")
      ->delimiter(',');
  gen->add_option("--out", out_path, "curve JSON output")->required();

  auto* grid = app.add_subcommand("field-grid", "evaluate the field on a grid");
  grid->add_option("--curve", curve_path, "curve JSON")->required();
  grid->add_option("--out", out_path, "grid CSV output")->required();
  grid->add_option("--resolution", resolution, "grid points per axis");
  grid->add_option("--extent", extent, "grid half-width");

  auto* bench = app.add_subcommand("bench", "micro-benchmarks");
  bench->add_option("--curve", curve_path, "curve JSON (default: screw, N=5000)");
  bench->add_option("--trials", trials, "timed iterations");
  bench->add_option("--seed", seed, "RNG seed");
  bench->add_option("--out", out_path, "JSON report output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (simulate->parsed()) {
    return cmd_simulate(config_path, out_path, workers, parallel_flag);
  }
  if (check->parsed()) {
    return cmd_check(group_name, trials, seed);
  }
  if (gen->parsed()) {
    if (gen->count("--samples") == 0 && kind == "composed_SE3") samples = 5000;
    return cmd_gen_curve(kind, samples, zeta_override, out_path);
  }
  if (grid->parsed()) {
    return cmd_field_grid(curve_path, out_path, resolution, extent);
  }
  if (bench->parsed()) {
    return cmd_bench(curve_path, trials, seed, out_path);
  }
  return kExitConfig;
}
