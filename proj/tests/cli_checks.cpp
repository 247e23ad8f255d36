// Drives the command-line binary end to end.  Every subcommand runs against
// scene and grid files written into a scratch directory; the emitted
// artifacts are re-read and cross-checked against direct library calls.
// Usage: cli_checks <path-to-cli-binary>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <bubblewave/bubblewave.hpp>

namespace bw = bubblewave;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int g_checks = 0;
int g_failures = 0;
std::string g_cli;
fs::path g_dir;

void check(const std::string& name, bool ok, const std::string& detail = "") {
  ++g_checks;
  if (!ok) ++g_failures;
  std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(),
              detail.empty() ? "" : "  ", detail.c_str());
}

/// Exit status of `<cli> <args>`; args may carry shell redirections.
int run(const std::string& args) {
  const std::string cmd = "\"" + g_cli + "\" " + args;
  const int raw = std::system(cmd.c_str());
  if (raw == -1) return -1;
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -2;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

struct Csv {
  std::string header;
  std::vector<std::vector<double>> rows;
};

Csv read_csv(const fs::path& path) {
  Csv csv;
  std::ifstream in(path, std::ios::binary);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (csv.header.empty()) {
      csv.header = line;
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
    csv.rows.push_back(std::move(values));
  }
  return csv;
}

std::string scene_dimer(const std::string& pulse) {
  return std::string(R"({
  "medium": {"rho_m": 1.0, "k_m": 1.0},
  "bubbles": [
    {"center": [0.0, 0.0, -0.01], "delta": 0.01, "radius_ref": 1.0,
     "rho_c_bar": 1.0, "k_c_bar": 4.1887902047863905},
    {"center": [0.0, 0.0, 0.01], "delta": 0.01, "radius_ref": 1.0,
     "rho_c_bar": 1.0, "k_c_bar": 4.1887902047863905}
  ],
  "source": {"position": [0.3, -2.0, 0.0], "pulse": )") +
         pulse + "}\n}\n";
}

void write_scenes() {
  write_file(g_dir / "dimer.json",
             scene_dimer(R"({"kind": "causal_poly_exp",
       "params": {"p": 10, "a": 2.0, "amplitude": 3000.0}})"));
  write_file(g_dir / "quiet.json", scene_dimer(R"({"kind": "zero"})"));
  // delta/distance large enough to break the inversion condition while the
  // cluster itself still builds.
  write_file(g_dir / "tight.json", R"({
  "medium": {"rho_m": 1.0, "k_m": 1.0},
  "bubbles": [
    {"center": [0.0, 0.0, 0.0], "delta": 0.5, "radius_ref": 1.0,
     "rho_c_bar": 1.0, "k_c_bar": 1.0},
    {"center": [0.2, 0.0, 0.0], "delta": 0.5, "radius_ref": 1.0,
     "rho_c_bar": 1.0, "k_c_bar": 1.0}
  ],
  "source": {"position": [0.0, 0.0, -5.0], "pulse": {"kind": "zero"}}
}
)");
  write_file(g_dir / "mono.json", R"({
  "medium": {"rho_m": 1.0, "k_m": 1.0},
  "bubbles": [
    {"center": [0.0, 0.0, 0.0], "delta": 0.01, "radius_ref": 1.0,
     "rho_c_bar": 1.0, "k_c_bar": 4.1887902047863905}
  ],
  "source": {"position": [0.0, 0.0, -3.0],
             "pulse": {"kind": "causal_poly_exp",
                       "params": {"p": 10, "a": 4.0, "amplitude": 100000.0}}}
}
)");
  write_file(g_dir / "bad.json", R"({"medium": {"rho_m": 1, "k_m": 1},
  "bubblez": []})");
}

void scenario_check() {
  const std::string scene = (g_dir / "dimer.json").string();
  const fs::path report_path = g_dir / "report.json";
  int rc = run("check --scene " + scene + " --out " + report_path.string() +
               " > /dev/null");
  json report;
  bool parsed = false;
  if (rc == 0) {
    try {
      report = json::parse(slurp(report_path));
      parsed = true;
    } catch (const json::exception&) {
    }
  }
  check("check writes a report", rc == 0 && parsed);

  if (parsed) {
    const auto scn = bw::load_scene(scene);
    const auto cluster = bw::build_cluster(scn.medium, scn.bubbles);
    const double omega =
        bw::minnaert_frequency(cluster.medium, cluster.bubbles[0]);
    const double j_expect =
        1.0 - cluster.bubbles[0].delta / (bw::a_surface(1.0) * 0.02);
    check("report omega_m matches the library",
          report.at("omega_m").size() == 2 &&
              report.at("omega_m")[0].get<double>() == omega);
    check("report dimer J factor matches the library",
          std::abs(report.at("j_factors").at("dimer").get<double>() -
                   j_expect) < 1e-14);
    check("well-separated dimer satisfies both conditions",
          report.at("inversion").at("satisfied").get<bool>() &&
              report.at("apriori").at("satisfied").get<bool>());
  }
  check("strict mode passes a healthy scene",
        run("check --scene " + scene + " --strict > /dev/null") == 0);

  const std::string tight = (g_dir / "tight.json").string();
  const fs::path tight_out = g_dir / "tight_report.json";
  rc = run("check --scene " + tight + " > " + tight_out.string());
  bool violated = false;
  if (rc == 0) {
    try {
      violated = !json::parse(slurp(tight_out))
                      .at("inversion")
                      .at("satisfied")
                      .get<bool>();
    } catch (const json::exception&) {
    }
  }
  check("close dimer reports a violated condition", rc == 0 && violated);
  check("strict mode exits 2 on the violated condition",
        run("check --scene " + tight + " --strict > /dev/null") == 2);
  check("missing scene file exits 1",
        run("check --scene " + (g_dir / "nope.json").string() +
            " 2> /dev/null") == 1);
  check("unknown scene key exits 1",
        run("check --scene " + (g_dir / "bad.json").string() +
            " 2> /dev/null") == 1);
}

void scenario_solve() {
  const std::string scene = (g_dir / "dimer.json").string();
  const fs::path zero_csv = g_dir / "y_zero.csv";
  const fs::path dense_csv = g_dir / "y_dense.csv";
  const std::string args = " --scene " + scene + " --T 6 --dt 0.002 ";

  check("solve with zeroed delays succeeds",
        run("solve" + args + "--zero-delays --out " + zero_csv.string()) == 0);
  check("dense solve succeeds",
        run("solve" + args + "--method dense --out " + dense_csv.string()) ==
            0);

  const auto scn = bw::load_scene(scene);
  const auto cluster = bw::build_cluster(scn.medium, scn.bubbles);
  const bw::IncidentField incident(scn.medium, scn.source);
  const auto a = bw::zero_delay_matrix(cluster);
  const auto ref = bw::solve_dense_system(
      a,
      [&](double t) {
        return bw::rhs_vector(incident, cluster, t, bw::ForcingModel::Monopole);
      },
      6.0, 0.002);

  const Csv dense = read_csv(dense_csv);
  bool exact = dense.header == "t,Y_1,Y_2" &&
               int(dense.rows.size()) == ref.steps();
  if (exact)
    for (int k = 0; k < ref.steps(); ++k)
      exact = exact && dense.rows[size_t(k)].size() == 3 &&
              dense.rows[size_t(k)][0] == ref.t[size_t(k)] &&
              dense.rows[size_t(k)][1] == ref.y(0, k) &&
              dense.rows[size_t(k)][2] == ref.y(1, k);
  check("dense CSV round-trips the library solution exactly", exact);

  const Csv zero = read_csv(zero_csv);
  double gap = 0.0, scale = 0.0;
  const size_t n = std::min(zero.rows.size(), size_t(ref.steps()));
  for (size_t k = 0; k < n; ++k)
    for (int i = 0; i < 2; ++i) {
      gap = std::max(gap,
                     std::abs(zero.rows[k][size_t(i + 1)] - ref.y(i, int(k))));
      scale = std::max(scale, std::abs(ref.y(i, int(k))));
    }
  {
    std::ostringstream detail;
    detail << "gap " << gap << ", scale " << scale;
    check("zero-delay solve matches the dense reference",
          zero.rows.size() == size_t(ref.steps()) && scale > 1e-3 &&
              gap < 1e-8,
          detail.str());
  }

  const fs::path rerun_csv = g_dir / "y_zero_rerun.csv";
  run("solve" + args + "--zero-delays --out " + rerun_csv.string());
  check("identical reruns produce byte-identical CSVs",
        slurp(zero_csv) == slurp(rerun_csv) && !slurp(zero_csv).empty());

  const std::string before = slurp(zero_csv);
  check("existing output is refused without --force",
        run("solve" + args + "--zero-delays --out " + zero_csv.string() +
            " 2> /dev/null") == 1 &&
            slurp(zero_csv) == before);
  check("--force overwrites",
        run("solve" + args + "--zero-delays --force --out " +
            zero_csv.string()) == 0);

  const fs::path quiet_csv = g_dir / "y_quiet.csv";
  run("solve --scene " + (g_dir / "quiet.json").string() +
      " --T 2 --dt 0.002 --out " + quiet_csv.string());
  const Csv quiet = read_csv(quiet_csv);
  bool all_zero = quiet.header == "t,Y_1,Y_2" && !quiet.rows.empty();
  for (const auto& row : quiet.rows)
    all_zero = all_zero && row[1] == 0.0 && row[2] == 0.0;
  check("a silent source yields exactly zero amplitudes", all_zero);

  check("inverted time grid exits 1",
        run("solve --scene " + scene + " --T 1 --dt 2 --out " +
            (g_dir / "x.csv").string() + " 2> /dev/null") == 1);
  check("unknown method exits 1",
        run("solve" + args + "--method nope --out " +
            (g_dir / "x.csv").string() + " 2> /dev/null") == 1);
}

void scenario_field() {
  const std::string scene = (g_dir / "mono.json").string();
  const fs::path out_dir = g_dir / "field";
  // Dyadic dt and unit-distance observation points keep every retarded time
  // exactly on a solver node, so the 1/r law holds to rounding.
  const int rc = run("field --scene " + scene +
                     " --T 8 --dt 0.0625 --obs 0,0,1 --obs 0,0,2 --out " +
                     out_dir.string());
  const Csv near = read_csv(out_dir / "point_000.csv");
  const Csv far = read_csv(out_dir / "point_001.csv");
  check("field writes one CSV per observation point",
        rc == 0 && near.header == "t,u_s" && far.header == "t,u_s" &&
            near.rows.size() == far.rows.size() && !near.rows.empty());

  bool causal = true;
  double scale = 0.0;
  for (const auto& row : near.rows) {
    if (row[0] <= 1.0 && row[1] != 0.0) causal = false;
    scale = std::max(scale, std::abs(row[1]));
  }
  check("no signal before the arrival time", causal && scale > 1e-6);

  // Same ray at distances 1 and 2: doubling the far series and shifting it
  // by the lag difference must reproduce the near series.
  const int shift = 16; // (2 - 1) / dt
  double worst = 0.0;
  for (size_t k = size_t(shift); k < far.rows.size(); ++k)
    worst = std::max(worst,
                     std::abs(2.0 * far.rows[k][1] - near.rows[k - shift][1]));
  {
    std::ostringstream detail;
    detail << "worst gap " << worst << " at scale " << scale;
    check("scattered field decays as 1/distance with the right delay",
          worst <= 32.0 * std::numeric_limits<double>::epsilon() * scale,
          detail.str());
  }

  check("malformed observation point exits 1",
        run("field --scene " + scene + " --T 1 --dt 0.1 --obs bad --out " +
            (g_dir / "f2").string() + " 2> /dev/null") == 1);

  const fs::path ch_dir = g_dir / "channels";
  const int ch_rc = run("field --scene " + (g_dir / "dimer.json").string() +
                        " --T 8 --dt 0.02 --obs 0,0,3 --channels u1,u2"
                        " --out " +
                        ch_dir.string());
  const Csv ch = read_csv(ch_dir / "point_000.csv");
  bool sums = ch_rc == 0 && ch.header == "t,u_s,U1,U2" && !ch.rows.empty();
  double peak = 0.0;
  if (sums)
    for (const auto& row : ch.rows) {
      sums = sums && row[1] == row[2] + row[3];
      peak = std::max(peak, std::abs(row[1]));
    }
  check("channel columns sum to the emitted field", sums && peak > 0.0);
}

void scenario_design() {
  const fs::path base = g_dir / "p0";
  std::array<int, 3> dims = {33, 1, 1};
  std::array<double, 3> spacing = {0.0625, 1.0, 1.0};
  std::array<double, 3> origin = {-1.0, 0.0, 0.0};
  bw::SpaceTimeGrid grid(1, dims, spacing, origin, 33, 0.125);
  bw::Field p0(size_t(grid.sample_count()), 0.0);
  for (int node = 0; node < grid.node_count(); ++node) {
    const double x = origin[0] + node * spacing[0];
    for (int it = 0; it < grid.nt; ++it) {
      const double t = it * grid.dt;
      p0[size_t(grid.index(node, it))] =
          (1.0 + x * x) * (0.3 + 0.2 * t + 0.7 * t * t);
    }
  }
  bw::write_grid(base.string(), grid, p0);

  const fs::path out = g_dir / "b";
  const fs::path report_path = g_dir / "b_report.json";
  const int rc = run("design-b --p0 " + base.string() +
                     " --d 0.25 --c 2 --out " + out.string() + " > /dev/null");

  bw::EffectiveDesign design;
  design.grid = grid;
  design.d_coeff = 0.25;
  design.c_coeff = 2.0;
  design.p0 = p0;
  design.y_field = bw::solve_susceptibility(0.25, p0, grid);
  const auto b = bw::recover_b(design);

  bool match = rc == 0;
  json report;
  try {
    report = json::parse(slurp(report_path));
    match = match && report.at("b_hat").get<double>() == b.b_hat &&
            report.at("unmasked").get<int>() == b.unmasked &&
            report.at("samples").get<long long>() == grid.sample_count();
  } catch (const json::exception&) {
    match = false;
  }
  check("design-b report matches the library", match);

  const auto [out_grid, out_values] = bw::read_grid(out.string());
  const auto [mask_grid, mask_values] = bw::read_grid(out.string() + "_mask");
  bool grids = out_grid.sample_count() == grid.sample_count() &&
               mask_grid.sample_count() == grid.sample_count();
  if (grids)
    for (size_t i = 0; i < out_values.size(); ++i) {
      const bool same_value =
          out_values[i] == b.values[i] ||
          (std::isnan(out_values[i]) && std::isnan(b.values[i]));
      grids = grids && same_value && mask_values[i] == (b.mask[i] ? 1.0 : 0.0);
    }
  check("recovered coefficient grid round-trips exactly", grids);

  check("design-b refuses to overwrite without --force",
        run("design-b --p0 " + base.string() + " --d 0.25 --c 2 --out " +
            out.string() + " 2> /dev/null") == 1);
  check("design-b --force overwrites",
        run("design-b --p0 " + base.string() + " --d 0.25 --c 2 --force"
            " --out " +
            out.string() + " > /dev/null") == 0);

  const fs::path flat = g_dir / "flat";
  bw::write_grid(flat.string(), grid,
                 bw::Field(size_t(grid.sample_count()), 0.0));
  const fs::path err_path = g_dir / "design_err.txt";
  const int degenerate =
      run("design-b --p0 " + flat.string() + " --d 0.25 --out " +
          (g_dir / "bflat").string() + " 2> " + err_path.string());
  check("a quiescent input exits 3",
        degenerate == 3 &&
            slurp(err_path).find("vanishes") != std::string::npos);
}

} // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: cli_checks <path-to-cli-binary>\n");
    return 2;
  }
  g_cli = argv[1];
  if (!fs::exists(g_cli)) {
    std::fprintf(stderr, "cli binary not found: %s\n", g_cli.c_str());
    return 2;
  }
  char tmpl[] = "/tmp/bw-cli-XXXXXX";
  if (!mkdtemp(tmpl)) {
    std::fprintf(stderr, "cannot create scratch directory\n");
    return 2;
  }
  g_dir = tmpl;
  write_scenes();

  scenario_check();
  scenario_solve();
  scenario_field();
  scenario_design();

  fs::remove_all(g_dir);
  std::printf("%d checks, %d failures\n", g_checks, g_failures);
  return g_failures == 0 ? 0 : 1;
}
