#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace pqnehari {

// Tensor-product grid on [-L, L]^d with zero Dirichlet boundary nodes.
// Nodes are stored row-major, last axis fastest.
struct GridSpec {
  int dimension = 1;
  double half_width = 16.0;
  int nodes_per_axis = 512;

  double spacing() const;
  std::size_t node_count() const;
  // Product of spacing over axes; the volume of one cell.
  double cell_volume() const;
  // Index stride of the given axis.
  std::size_t stride(int axis) const;
  // Per-axis node index of a flat node index.
  std::array<int, 3> multi_index(std::size_t node) const;
  std::array<double, 3> coordinates(std::size_t node) const;
  bool is_boundary(std::size_t node) const;
  // Smallest distance (in nodes) to the boundary across axes.
  int boundary_distance(std::size_t node) const;

  // Throws ParameterError unless 1 <= d <= 3, L > 0 and n >= 16.
  void validate() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Real values on the nodes of a grid. Boundary values are exactly zero and
// all values are finite; the constructors enforce both.
class GridField {
 public:
  GridField() = default;
  explicit GridField(const GridSpec& grid);
  GridField(const GridSpec& grid, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  // Mutable view; callers restore the invariants with enforce_boundary().
  std::span<double> mutable_values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  void enforce_boundary();
  bool is_zero() const;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

// Forward-difference gradient on the (n-1)^d cells anchored at their lowest
// corner node. Component k of cell c is stored at components[c * d + k].
struct CellGradient {
  int dimension = 1;
  std::vector<std::size_t> anchors;
  std::vector<double> components;
};

// Flat node indices of the cell anchors (every coordinate < n - 1).
std::vector<std::size_t> cell_anchors(const GridSpec& grid);

CellGradient gradient_field(const GridField& u);

// sum over cells of h^d |grad u|^p.
double p_dirichlet_energy(const GridField& u, double p);

// L2 gradient of (1/p) * p_dirichlet_energy with respect to the node values,
// divided by the cell volume so it is a pointwise density. When p < 2 the
// modulus is smoothed as sqrt(|g|^2 + eps^2).
std::vector<double> p_dirichlet_gradient(const GridField& u, double p, double eps_reg);

// p_dirichlet_energy + integrate(a |u|^p). Throws PreconditionError on a
// negative potential sample.
double weighted_norm_p(const GridField& u, std::span<const double> a, double p);

// Trapezoidal tensor-product quadrature with deterministic pairwise summation.
double integrate(const GridSpec& grid, std::span<const double> w);

// Trapezoid weight of one node.
double trapezoid_weight(const GridSpec& grid, std::size_t node);

// Deterministic pairwise sum; the order depends only on the length.
double pairwise_sum(std::span<const double> terms);

// CSV with a header row (x0[,x1,x2],value), one node per line, values at 17
// significant digits so reloading is bit-exact.
void write_csv(std::ostream& out, const GridField& u);
void write_csv(const std::string& path, const GridField& u);
GridField read_csv(std::istream& in, const GridSpec& grid);

}  // namespace pqnehari
