#pragma once

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "admflow/errors.hpp"
#include "admflow/flow.hpp"

namespace admflow {

// Shortest representation that round-trips through strtod.
inline std::string format_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  double back = std::strtod(buf, nullptr);
  if (back == x) {
    // try to shorten
    for (int prec = 1; prec <= 16; ++prec) {
      char s[40];
      std::snprintf(s, sizeof s, "%.*g", prec, x);
      if (std::strtod(s, nullptr) == x) return s;
    }
  }
  return buf;
}

// Header `t,sup_phi,l2_phi,min_theta,bnd_err_m1,bnd_err_p1`.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,sup_phi,l2_phi,min_theta,bnd_err_m1,bnd_err_p1\n";
  for (const auto& p : traj.points)
    os << format_full(p.t) << ',' << format_full(p.sup_phi) << ','
       << format_full(p.l2_phi) << ',' << format_full(p.min_theta) << ','
       << format_full(p.bnd_err_m1) << ',' << format_full(p.bnd_err_p1) << '\n';
}

// Header `z,theta,phi,V`, one row per node.
inline void write_snapshot_csv(std::ostream& os, const FlowState& st,
                               const std::vector<double>& velocity) {
  os << "z,theta,phi,V\n";
  for (std::size_t i = 0; i < st.grid.size(); ++i)
    os << format_full(st.grid[i]) << ',' << format_full(st.theta[i]) << ','
       << format_full(st.phi[i]) << ',' << format_full(velocity[i]) << '\n';
}

// Header `z,theta`: the GQE profile sampled on the grid.
inline void write_profile_csv(std::ostream& os, const std::vector<double>& grid,
                              const std::vector<double>& theta) {
  os << "z,theta\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    os << format_full(grid[i]) << ',' << format_full(theta[i]) << '\n';
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  if (!std::getline(is, line))
    throw Error(ErrorKind::InvalidInput, "empty CSV");
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) table.header.push_back(cell);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (row.size() != table.header.size())
      throw Error(ErrorKind::InvalidInput, "ragged CSV row: " + line);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace admflow
