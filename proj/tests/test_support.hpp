#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "pqnehari/functional.hpp"
#include "pqnehari/nehari.hpp"

namespace pqnehari::testing {

// Field with the given node values; boundary nodes forced to zero.
inline GridField field_from(const GridSpec& grid, const std::function<double(double)>& fn) {
  std::vector<double> values(grid.node_count());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = grid.is_boundary(i) ? 0.0 : fn(grid.coordinates(i)[0]);
  }
  return GridField(grid, std::move(values));
}

inline GridSpec line_grid(double half_width, int nodes) {
  return GridSpec{.dimension = 1, .half_width = half_width, .nodes_per_axis = nodes};
}

// p = q = 2, alpha = beta = 1, pure quartic nonlinearities, a = b = 1,
// lambda = 0. Dimension proxy 3 keeps r = 4 below the critical exponent 6.
inline ProblemConfig quartic_config(int nodes = 256, double lambda = 0.0) {
  ProblemConfig c;
  c.exponents = Exponents{.p = 2.0, .q = 2.0, .alpha = 1.0, .beta = 1.0};
  c.dimension_proxy = 3.0;
  c.f.kind = NonlinearityKind::kPurePower;
  c.f.power = 4.0;
  c.g = c.f;
  c.lambda.base_level = lambda;
  c.grid = line_grid(16.0, nodes);
  return c;
}

// Default exponents and nonlinearities on a coarser grid for faster solves.
inline ProblemConfig small_default_config(int nodes = 256) {
  ProblemConfig c = default_problem_config();
  c.grid = line_grid(16.0, nodes);
  return c;
}

inline GridField bump(const GridSpec& grid, double centre, double width, double amplitude) {
  return field_from(grid, [=](double x) {
    const double taper = std::cos(0.5 * M_PI * x / grid.half_width);
    return amplitude * std::exp(-0.5 * (x - centre) * (x - centre) / (width * width)) * taper;
  });
}

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Hand-assembled trapezoid and forward-difference sums for a zero-boundary
// 1-D field.
inline double mass2(const GridField& u) {
  double s = 0.0;
  for (double x : u.values()) s += x * x;
  return s * u.grid().spacing();
}

inline double mass4(const GridField& u) {
  double s = 0.0;
  for (double x : u.values()) s += x * x * x * x;
  return s * u.grid().spacing();
}

inline double slope_energy(const GridField& u) {
  const double h = u.grid().spacing();
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) s += (u[i + 1] - u[i]) * (u[i + 1] - u[i]) / h;
  return s;
}

inline CoupledState scaled(const CoupledState& s, double cu, double cv) {
  std::vector<double> u(s.u.values().begin(), s.u.values().end());
  std::vector<double> v(s.v.values().begin(), s.v.values().end());
  for (double& x : u) x *= cu;
  for (double& x : v) x *= cv;
  return {GridField(s.u.grid(), u), GridField(s.v.grid(), v)};
}

inline CoupledState scaled(const CoupledState& s, double c) { return scaled(s, c, c); }

inline CoupledState axpy(const CoupledState& s, double t, const CoupledState& d) {
  std::vector<double> u(s.u.size()), v(s.v.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = s.u[i] + t * d.u[i];
    v[i] = s.v[i] + t * d.v[i];
  }
  return {GridField(s.u.grid(), u), GridField(s.v.grid(), v)};
}

}  // namespace pqnehari::testing
