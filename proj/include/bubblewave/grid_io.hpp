#ifndef BUBBLEWAVE_GRID_IO_HPP
#define BUBBLEWAVE_GRID_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bubblewave/dynamics.hpp"
#include "bubblewave/effective.hpp"
#include "bubblewave/errors.hpp"
#include "bubblewave/field.hpp"

namespace bubblewave {

/// Shortest-round-trip decimal formatting shared by all writers, so that
/// reruns of the same configuration produce byte-identical artifacts.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  return out;
}

} // namespace detail

/// Amplitude table: '#' metadata, then t,Y_1..Y_M rows.
inline void write_amplitude_csv(const std::string& path,
                                const AmplitudeSolution& sol,
                                const std::vector<std::string>& metadata) {
  auto out = detail::open_for_write(path);
  for (const auto& line : metadata) out << "# " << line << "\n";
  for (const auto& w : sol.warnings) out << "# warning: " << w << "\n";
  out << "t";
  for (int i = 0; i < sol.size(); ++i) out << ",Y_" << (i + 1);
  out << "\n";
  for (int k = 0; k < sol.steps(); ++k) {
    out << format_number(sol.t[size_t(k)]);
    for (int i = 0; i < sol.size(); ++i)
      out << "," << format_number(sol.y(i, k));
    out << "\n";
  }
}

/// Per-observation-point series: t,u_s or t,u_s,U1,U2 when channels exist.
inline void write_timeseries_csv(const std::string& path,
                                 const std::vector<double>& times,
                                 const TimeSeries& ts,
                                 const std::vector<std::string>& metadata) {
  auto out = detail::open_for_write(path);
  for (const auto& line : metadata) out << "# " << line << "\n";
  for (const auto& w : ts.warnings) out << "# warning: " << w << "\n";
  const bool channels = !ts.u1.empty();
  out << (channels ? "t,u_s,U1,U2" : "t,u_s") << "\n";
  for (size_t k = 0; k < times.size(); ++k) {
    out << format_number(times[k]) << "," << format_number(ts.values[k]);
    if (channels)
      out << "," << format_number(ts.u1[k]) << ","
          << format_number(ts.u2[k]);
    out << "\n";
  }
}

/// Space-time grid data: `<base>.csv` holds one row per spatial node (time
/// samples as columns, node-major order); `<base>.json` is the sidecar with
/// the lattice description.
inline void write_grid(const std::string& base, const SpaceTimeGrid& grid,
                       const Field& field,
                       const std::vector<std::string>& metadata = {}) {
  require_field_shape(grid, field, "field");
  nlohmann::json side;
  side["rank"] = grid.rank;
  side["dims"] =
      std::vector<int>(grid.dims.begin(), grid.dims.begin() + grid.rank);
  side["spacing"] = std::vector<double>(grid.spacing.begin(),
                                        grid.spacing.begin() + grid.rank);
  side["origin"] = std::vector<double>(grid.origin.begin(),
                                       grid.origin.begin() + grid.rank);
  side["nt"] = grid.nt;
  side["dt"] = grid.dt;
  {
    auto out = detail::open_for_write(base + ".json");
    out << side.dump(2) << "\n";
  }
  auto out = detail::open_for_write(base + ".csv");
  for (const auto& line : metadata) out << "# " << line << "\n";
  for (int node = 0; node < grid.node_count(); ++node) {
    for (int it = 0; it < grid.nt; ++it) {
      if (it) out << ",";
      out << format_number(field[size_t(grid.index(node, it))]);
    }
    out << "\n";
  }
}

/// Inverse of write_grid.
inline std::pair<SpaceTimeGrid, Field> read_grid(const std::string& base) {
  std::ifstream side_in(base + ".json", std::ios::binary);
  if (!side_in) throw SceneParseError("cannot open sidecar: " + base + ".json");
  nlohmann::json side;
  try {
    side = nlohmann::json::parse(side_in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SceneParseError(std::string("sidecar: ") + e.what());
  }
  for (auto it = side.begin(); it != side.end(); ++it) {
    const std::string k = it.key();
    if (k != "rank" && k != "dims" && k != "spacing" && k != "origin" &&
        k != "nt" && k != "dt")
      throw SceneParseError("unknown sidecar key \"" + k + "\"");
  }
  const int rank = side.at("rank").get<int>();
  if (rank < 1 || rank > 3)
    throw SceneParseError("sidecar rank must be 1, 2 or 3");
  std::array<int, 3> dims = {1, 1, 1};
  std::array<double, 3> spacing = {1.0, 1.0, 1.0};
  std::array<double, 3> origin = {0.0, 0.0, 0.0};
  const auto dims_v = side.at("dims").get<std::vector<int>>();
  const auto spacing_v = side.at("spacing").get<std::vector<double>>();
  const auto origin_v = side.at("origin").get<std::vector<double>>();
  if (int(dims_v.size()) != rank || int(spacing_v.size()) != rank ||
      int(origin_v.size()) != rank)
    throw SceneParseError("sidecar dims/spacing/origin must have rank entries");
  for (int a = 0; a < rank; ++a) {
    dims[size_t(a)] = dims_v[size_t(a)];
    spacing[size_t(a)] = spacing_v[size_t(a)];
    origin[size_t(a)] = origin_v[size_t(a)];
  }
  SpaceTimeGrid grid(rank, dims, spacing, origin, side.at("nt").get<int>(),
                     side.at("dt").get<double>());

  std::ifstream in(base + ".csv", std::ios::binary);
  if (!in) throw SceneParseError("cannot open grid data: " + base + ".csv");
  Field field;
  field.reserve(size_t(grid.sample_count()));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ','))
      field.push_back(std::stod(cell));
  }
  if ((long long)field.size() != grid.sample_count())
    throw GridMismatch("grid data has " + std::to_string(field.size()) +
                       " values, sidecar declares " +
                       std::to_string(grid.sample_count()));
  return {grid, field};
}

} // namespace bubblewave

#endif // BUBBLEWAVE_GRID_IO_HPP
