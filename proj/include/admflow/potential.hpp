#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "admflow/errors.hpp"

namespace admflow {

// u_c(z) = 1/2 [(1-z)log(1-z) + (1+z)log(1+z) - 2 log 2]; u_c(+-1) = 0.
inline double canonical_potential_value(double z) {
  double a = 1.0 - z, b = 1.0 + z;
  double ta = a > 0.0 ? a * std::log(a) : 0.0;
  double tb = b > 0.0 ? b * std::log(b) : 0.0;
  return 0.5 * (ta + tb) - std::log(2.0);
}

// y_c = u_c'(z) = 1/2 log((1+z)/(1-z)); +-inf at the ends.
inline double canonical_potential_slope(double z) {
  if (z <= -1.0) return -std::numeric_limits<double>::infinity();
  if (z >= 1.0) return std::numeric_limits<double>::infinity();
  return 0.5 * (std::log1p(z) - std::log1p(-z));
}

inline double canonical_potential_curvature(double z) {
  return 1.0 / ((1.0 - z) * (1.0 + z));  // 1/Theta_c
}

// Node samples of a symplectic potential: u with u'' = 1/Theta and u(+-1)=0,
// the Legendre variable y = u', and the dual h(y) = -u + y z. The smooth
// part u - u_c is kept separately; y and h are +-inf at the poles.
struct SymplecticPotential {
  std::vector<double> z;
  std::vector<double> u;
  std::vector<double> y;
  std::vector<double> h;
  std::vector<double> correction;  // u - u_c at the nodes
};

inline SymplecticPotential canonical_potential(int n = 200) {
  SymplecticPotential sp;
  sp.z.resize(n + 1);
  sp.u.resize(n + 1);
  sp.y.resize(n + 1);
  sp.h.resize(n + 1);
  sp.correction.assign(n + 1, 0.0);
  for (int i = 0; i <= n; ++i) {
    double z = -1.0 + 2.0 * i / n;
    sp.z[i] = z;
    sp.u[i] = canonical_potential_value(z);
    sp.y[i] = canonical_potential_slope(z);
    sp.h[i] = sp.y[i] * z - sp.u[i];
  }
  return sp;
}

// u = u_c + double integral of (1/Theta - 1/Theta_c); the integrand is
// bounded because Theta and Theta_c share values and slopes at the ends.
// The linear correction pins u(+-1) = 0.
inline SymplecticPotential potential_from_theta(const std::vector<double>& grid,
                                                const std::vector<double>& theta) {
  int n = static_cast<int>(grid.size()) - 1;
  if (n < 4 || theta.size() != grid.size())
    throw Error(ErrorKind::InvalidInput, "potential_from_theta: bad grid");
  double dz = grid[1] - grid[0];

  std::vector<double> w(n + 1, 0.0);
  for (int i = 1; i < n; ++i) {
    if (!(theta[i] > 0.0))
      throw Error(ErrorKind::InvalidInput,
                  "potential_from_theta: Theta <= 0 in the interior");
    w[i] = 1.0 / theta[i] - canonical_potential_curvature(grid[i]);
  }
  // quadratic extrapolation to the poles, where both reciprocals diverge
  w[0] = 3.0 * w[1] - 3.0 * w[2] + w[3];
  w[n] = 3.0 * w[n - 1] - 3.0 * w[n - 2] + w[n - 3];

  std::vector<double> v(n + 1, 0.0), big(n + 1, 0.0);
  for (int i = 1; i <= n; ++i) v[i] = v[i - 1] + 0.5 * dz * (w[i - 1] + w[i]);
  for (int i = 1; i <= n; ++i) big[i] = big[i - 1] + 0.5 * dz * (v[i - 1] + v[i]);
  double c1 = -big[n] / 2.0;

  SymplecticPotential sp;
  sp.z = grid;
  sp.u.resize(n + 1);
  sp.y.resize(n + 1);
  sp.h.resize(n + 1);
  sp.correction.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    sp.correction[i] = big[i] + c1 * (1.0 + grid[i]);
    sp.u[i] = canonical_potential_value(grid[i]) + sp.correction[i];
    sp.y[i] = canonical_potential_slope(grid[i]) + v[i] + c1;
    sp.h[i] = sp.y[i] * grid[i] - sp.u[i];
  }
  return sp;
}

}  // namespace admflow
