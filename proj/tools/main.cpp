// Batch driver: load a scene, run feasibility checks, amplitude solvers,
// field reconstruction or the effective-medium inverse design, and emit
// plot-ready CSV/JSON artifacts.
//
// Exit codes: 0 success, 1 parse/config error, 2 condition violation under
// --strict, 3 numerical degeneracy.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <bubblewave/bubblewave.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitCondition = 2;
constexpr int kExitDegenerate = 3;

struct RunConfig {
  std::string scene_path;
  double horizon = 0.0;
  double dt = 0.0;
  std::string method = "delay";
  std::string variant = "theorem";
  std::string forcing = "monopole";
  std::string out;
  bool strict = false;
  bool force = false;
  bool zero_delays = false;
  std::string channels;
  std::vector<std::string> obs;

  // design-b
  std::string p0_base;
  double d_coeff = 1.0;
  double c_coeff = 1.0;
  double smooth_width = 1.0;
  double eps_mask = 1e-3;
};

void refuse_overwrite(const std::string& path, bool force) {
  if (!force && fs::exists(path))
    throw bubblewave::Error("refusing to overwrite " + path +
                            " (pass --force to allow)");
}

bubblewave::ForcingModel forcing_model(const RunConfig& cfg) {
  if (cfg.forcing == "monopole") return bubblewave::ForcingModel::Monopole;
  if (cfg.forcing == "quadrature")
    return bubblewave::ForcingModel::SurfaceQuadrature;
  throw bubblewave::Error("unknown forcing model: " + cfg.forcing);
}

bubblewave::FieldVariant field_variant(const RunConfig& cfg) {
  if (cfg.variant == "theorem") return bubblewave::FieldVariant::Theorem;
  if (cfg.variant == "corollary") return bubblewave::FieldVariant::Corollary;
  throw bubblewave::Error("unknown variant: " + cfg.variant);
}

void require_time_grid(const RunConfig& cfg) {
  if (!(cfg.horizon > 0.0) || !(cfg.dt > 0.0) || !(cfg.dt < cfg.horizon))
    throw bubblewave::Error("need 0 < dt < T");
}

std::vector<std::pair<int, int>> consecutive_pairing(int m) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i + 1 < m; i += 2) pairs.emplace_back(i, i + 1);
  return pairs;
}

bubblewave::Vec3 parse_point(const std::string& text) {
  bubblewave::Vec3 p;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf%c", &p[0], &p[1], &p[2],
                  &extra) != 3)
    throw bubblewave::Error("cannot parse observation point \"" + text +
                            "\" (expected x,y,z)");
  return p;
}

double dominant_coupling_factor(const bubblewave::ClusterModel& c, int i,
                                int j, int neighbors) {
  const auto& b = c.bubbles[size_t(i)];
  const double xi = (c.bubbles[size_t(i)].center - c.bubbles[size_t(j)].center).norm();
  return 1.0 - neighbors * b.delta /
                   (bubblewave::a_surface(b.radius_ref) * xi);
}

int cmd_check(const RunConfig& cfg) {
  const auto scene = bubblewave::load_scene(cfg.scene_path);
  const auto cluster = bubblewave::build_cluster(scene.medium, scene.bubbles);
  bubblewave::validate_source_position(cluster, scene.source);
  const auto inversion = bubblewave::check_inversion_condition(cluster);
  const auto apriori = bubblewave::check_apriori_condition(cluster);

  json report;
  json omega = json::array();
  for (const auto& b : cluster.bubbles)
    omega.push_back(bubblewave::minnaert_frequency(cluster.medium, b));
  report["omega_m"] = omega;
  report["inversion"] = {{"satisfied", inversion.satisfied},
                         {"value", inversion.value},
                         {"margin", inversion.margin}};
  report["apriori"] = {{"satisfied", apriori.satisfied},
                       {"value", apriori.value}};

  json jf = json::object();
  const int m = cluster.size();
  if (m == 2) {
    jf["dimer"] = dominant_coupling_factor(cluster, 0, 1, 1);
  } else if (m == 4) {
    try {
      bubblewave::decompose_tetramer(cluster);
      jf["tetramer"] = dominant_coupling_factor(cluster, 0, 1, 3);
    } catch (const bubblewave::Error&) {
      // not a regular tetramer; fall through to pairwise report
    }
  }
  if (!jf.contains("tetramer") && m % 2 == 0 && m > 2) {
    json pairs = json::array();
    for (const auto& [a, b] : consecutive_pairing(m))
      pairs.push_back(dominant_coupling_factor(cluster, a, b, 1));
    jf["pairs"] = pairs;
  }
  report["j_factors"] = jf;

  const std::string text = report.dump(2);
  std::cout << text << "\n";
  if (!cfg.out.empty()) {
    refuse_overwrite(cfg.out, cfg.force);
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) throw bubblewave::Error("cannot open " + cfg.out);
    out << text << "\n";
  }
  if (cfg.strict && (!inversion.satisfied || !apriori.satisfied))
    return kExitCondition;
  return kExitOk;
}

bubblewave::AmplitudeSolution
solve_amplitudes(const RunConfig& cfg, const bubblewave::ClusterModel& cluster,
                 const bubblewave::IncidentField& incident) {
  const auto model = forcing_model(cfg);
  if (cfg.method == "delay") {
    if (cfg.zero_delays) {
      bubblewave::ClusterModel zeroed = cluster;
      zeroed.delays.setZero();
      return bubblewave::solve_delay_system(zeroed, incident, cfg.horizon,
                                            cfg.dt, model);
    }
    return bubblewave::solve_delay_system(cluster, incident, cfg.horizon,
                                          cfg.dt, model);
  }
  if (cfg.method == "dense") {
    bubblewave::validate_source_position(cluster, incident.source());
    const auto a = bubblewave::zero_delay_matrix(cluster);
    return bubblewave::solve_dense_system(
        a,
        [&](double t) {
          return bubblewave::rhs_vector(incident, cluster, t, model);
        },
        cfg.horizon, cfg.dt);
  }
  if (cfg.method == "closed-dimer")
    return bubblewave::closed_form_dimer(cluster, incident, cfg.horizon,
                                         cfg.dt, model);
  if (cfg.method == "closed-tetramer")
    return bubblewave::closed_form_tetramer(cluster, incident, cfg.horizon,
                                            cfg.dt, model);
  if (cfg.method == "dimer-collection")
    return bubblewave::solve_dimer_collection(
        cluster, consecutive_pairing(cluster.size()), incident, cfg.horizon,
        cfg.dt, 0.1, model);
  throw bubblewave::Error("unknown method: " + cfg.method);
}

int cmd_solve(const RunConfig& cfg) {
  require_time_grid(cfg);
  refuse_overwrite(cfg.out, cfg.force);
  const auto scene = bubblewave::load_scene(cfg.scene_path);
  const auto cluster = bubblewave::build_cluster(scene.medium, scene.bubbles);
  const bubblewave::IncidentField incident(scene.medium, scene.source);
  const auto sol = solve_amplitudes(cfg, cluster, incident);
  for (const auto& w : sol.warnings) std::cerr << "warning: " << w << "\n";
  bubblewave::write_amplitude_csv(
      cfg.out, sol,
      {"bubblewave solve", "scene: " + cfg.scene_path,
       "method: " + cfg.method + (cfg.zero_delays ? " (delays zeroed)" : ""),
       "forcing: " + cfg.forcing,
       "T: " + bubblewave::format_number(cfg.horizon) +
           "  dt: " + bubblewave::format_number(cfg.dt),
       "residual_max: " + bubblewave::format_number(sol.residual_max)});
  return kExitOk;
}

int cmd_field(const RunConfig& cfg) {
  require_time_grid(cfg);
  if (cfg.obs.empty())
    throw bubblewave::Error("field requires at least one --obs point");
  const auto scene = bubblewave::load_scene(cfg.scene_path);
  const auto cluster = bubblewave::build_cluster(scene.medium, scene.bubbles);
  const bubblewave::IncidentField incident(scene.medium, scene.source);

  std::vector<bubblewave::Vec3> points;
  for (const auto& text : cfg.obs) points.push_back(parse_point(text));
  const auto obs =
      bubblewave::ObservationSet::uniform(points, cfg.horizon, cfg.dt);

  std::vector<bubblewave::TimeSeries> series;
  if (!cfg.channels.empty()) {
    if (cfg.method == "dimer-collection")
      series = bubblewave::dimer_collection_field(
          cluster, consecutive_pairing(cluster.size()), incident, obs,
          cfg.horizon, cfg.dt);
    else if (cluster.size() == 2)
      series = bubblewave::dimer_dominant_field(cluster, incident, obs,
                                                cfg.horizon, cfg.dt);
    else if (cluster.size() == 4)
      series = bubblewave::tetramer_dominant_field(cluster, incident, obs,
                                                   cfg.horizon, cfg.dt);
    else
      throw bubblewave::Error(
          "--channels needs a dimer, a tetramer or --method dimer-collection");
  } else {
    const auto sol = solve_amplitudes(cfg, cluster, incident);
    for (const auto& w : sol.warnings) std::cerr << "warning: " << w << "\n";
    series = bubblewave::scattered_field(cluster, sol, obs,
                                         field_variant(cfg));
  }

  fs::create_directories(cfg.out);
  for (size_t p = 0; p < series.size(); ++p) {
    char name[32];
    std::snprintf(name, sizeof(name), "point_%03zu.csv", p);
    const std::string path = (fs::path(cfg.out) / name).string();
    refuse_overwrite(path, cfg.force);
    const auto& x = points[p];
    bubblewave::write_timeseries_csv(
        path, obs.times, series[p],
        {"bubblewave field", "scene: " + cfg.scene_path,
         "point: " + bubblewave::format_number(x[0]) + "," +
             bubblewave::format_number(x[1]) + "," +
             bubblewave::format_number(x[2]),
         "variant: " + cfg.variant,
         "channels: " + (cfg.channels.empty() ? std::string("u_s")
                                              : cfg.channels)});
  }
  return kExitOk;
}

int cmd_design_b(const RunConfig& cfg) {
  auto [grid, p0] = bubblewave::read_grid(cfg.p0_base);
  refuse_overwrite(cfg.out + ".csv", cfg.force);
  refuse_overwrite(cfg.out + ".json", cfg.force);
  refuse_overwrite(cfg.out + "_report.json", cfg.force);

  bubblewave::EffectiveDesign design;
  design.grid = grid;
  design.d_coeff = cfg.d_coeff;
  design.c_coeff = cfg.c_coeff;
  design.p0 = std::move(p0);
  design.regularization.width_cells = cfg.smooth_width;
  design.regularization.eps_mask = cfg.eps_mask;
  design.y_field =
      bubblewave::solve_susceptibility(cfg.d_coeff, design.p0, grid);
  const auto b = bubblewave::recover_b(design);

  bubblewave::Field mask(b.mask.size());
  for (size_t i = 0; i < b.mask.size(); ++i) mask[i] = b.mask[i];
  bubblewave::write_grid(cfg.out, grid, b.values,
                         {"bubblewave design-b", "p0: " + cfg.p0_base});
  bubblewave::write_grid(cfg.out + "_mask", grid, mask,
                         {"bubblewave design-b mask (1 = defined)"});

  const auto norms = bubblewave::dispersive_residual(
      design.p0,
      std::vector<bubblewave::Field>(size_t(grid.rank),
                                     bubblewave::Field(design.p0.size(), 0.0)),
      design.y_field, bubblewave::Field(design.p0.size(), 0.0), cfg.c_coeff,
      cfg.d_coeff, grid);

  json report;
  report["b_hat"] = b.b_hat;
  report["unmasked"] = b.unmasked;
  report["samples"] = grid.sample_count();
  report["oscillator_residual"] = {{"max", norms.oscillator.max},
                                   {"l2", norms.oscillator.l2}};
  const std::string text = report.dump(2);
  std::cout << text << "\n";
  std::ofstream out(cfg.out + "_report.json", std::ios::binary);
  if (!out) throw bubblewave::Error("cannot open " + cfg.out + "_report.json");
  out << text << "\n";
  return kExitOk;
}

template <class Fn> int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const bubblewave::AllMasked& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const bubblewave::StrongCouplingRegime& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const bubblewave::SingularMatrix& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const bubblewave::NonPositiveEigenvalue& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-domain acoustic scattering by resonant micro-bubbles"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_scene = [&](CLI::App* cmd) {
    cmd->add_option("--scene", cfg.scene_path, "scene JSON file")->required();
  };
  auto add_time = [&](CLI::App* cmd) {
    cmd->add_option("--T", cfg.horizon, "time horizon")->required();
    cmd->add_option("--dt", cfg.dt, "time step")->required();
  };
  auto add_method = [&](CLI::App* cmd) {
    cmd->add_option("--method", cfg.method,
                    "delay | dense | closed-dimer | closed-tetramer | "
                    "dimer-collection")
        ->default_val("delay");
    cmd->add_option("--forcing", cfg.forcing, "monopole | quadrature")
        ->default_val("monopole");
    cmd->add_flag("--zero-delays", cfg.zero_delays,
                  "zero the delay matrix before the delay solve");
  };

  CLI::App* check = app.add_subcommand("check", "feasibility report (JSON)");
  add_scene(check);
  check->add_option("--out", cfg.out, "also write the report here");
  check->add_flag("--strict", cfg.strict,
                  "exit 2 when a condition is violated");
  check->add_flag("--force", cfg.force, "overwrite existing outputs");

  CLI::App* solve = app.add_subcommand("solve", "amplitude CSV (t, Y_1..Y_M)");
  add_scene(solve);
  add_time(solve);
  add_method(solve);
  solve->add_option("--out", cfg.out, "output CSV path")->required();
  solve->add_flag("--force", cfg.force, "overwrite existing outputs");

  CLI::App* field =
      app.add_subcommand("field", "scattered pressure at observation points");
  add_scene(field);
  add_time(field);
  add_method(field);
  field->add_option("--obs", cfg.obs, "observation point x,y,z (repeatable)")
      ->required();
  field->add_option("--variant", cfg.variant, "theorem | corollary")
      ->default_val("theorem");
  field->add_option("--channels", cfg.channels,
                    "emit the u1,u2 wave decomposition");
  field->add_option("--out", cfg.out, "output directory")->required();
  field->add_flag("--force", cfg.force, "overwrite existing outputs");

  CLI::App* design =
      app.add_subcommand("design-b", "recover the effective coefficient b");
  design->add_option("--p0", cfg.p0_base, "input grid base path (no suffix)")
      ->required();
  design->add_option("--d", cfg.d_coeff, "dispersion coefficient (s^2)")
      ->required();
  design->add_option("--c", cfg.c_coeff, "wave coefficient")->default_val(1.0);
  design->add_option("--smooth-width", cfg.smooth_width,
                     "Gaussian presmoothing sigma in cells");
  design->add_option("--eps-mask", cfg.eps_mask,
                     "denominator mask threshold (relative)");
  design->add_option("--out", cfg.out, "output grid base path")->required();
  design->add_flag("--force", cfg.force, "overwrite existing outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (check->parsed()) return guarded([&] { return cmd_check(cfg); });
  if (solve->parsed()) return guarded([&] { return cmd_solve(cfg); });
  if (field->parsed()) return guarded([&] { return cmd_field(cfg); });
  if (design->parsed()) return guarded([&] { return cmd_design_b(cfg); });
  return kExitConfig;
}
