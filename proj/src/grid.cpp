#include "pqnehari/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pqnehari/errors.hpp"

namespace pqnehari {

double GridSpec::spacing() const { return 2.0 * half_width / (nodes_per_axis - 1); }

std::size_t GridSpec::node_count() const {
  std::size_t count = 1;
  for (int k = 0; k < dimension; ++k) count *= static_cast<std::size_t>(nodes_per_axis);
  return count;
}

double GridSpec::cell_volume() const { return std::pow(spacing(), dimension); }

std::size_t GridSpec::stride(int axis) const {
  std::size_t s = 1;
  for (int k = dimension - 1; k > axis; --k) s *= static_cast<std::size_t>(nodes_per_axis);
  return s;
}

std::array<int, 3> GridSpec::multi_index(std::size_t node) const {
  std::array<int, 3> idx{0, 0, 0};
  const auto n = static_cast<std::size_t>(nodes_per_axis);
  for (int k = dimension - 1; k >= 0; --k) {
    idx[static_cast<std::size_t>(k)] = static_cast<int>(node % n);
    node /= n;
  }
  return idx;
}

std::array<double, 3> GridSpec::coordinates(std::size_t node) const {
  const auto idx = multi_index(node);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  const double h = spacing();
  for (int k = 0; k < dimension; ++k) {
    x[static_cast<std::size_t>(k)] = -half_width + h * idx[static_cast<std::size_t>(k)];
  }
  return x;
}

bool GridSpec::is_boundary(std::size_t node) const { return boundary_distance(node) == 0; }

int GridSpec::boundary_distance(std::size_t node) const {
  const auto idx = multi_index(node);
  int best = nodes_per_axis;
  for (int k = 0; k < dimension; ++k) {
    const int i = idx[static_cast<std::size_t>(k)];
    best = std::min(best, std::min(i, nodes_per_axis - 1 - i));
  }
  return best;
}

void GridSpec::validate() const {
  if (dimension < 1 || dimension > 3) throw ParameterError("grid dimension must be 1, 2 or 3");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw ParameterError("grid half_width must be a finite positive real");
  }
  if (nodes_per_axis < 16) throw ParameterError("grid nodes_per_axis must be >= 16");
}

GridField::GridField(const GridSpec& grid) : grid_(grid) {
  grid_.validate();
  values_.assign(grid_.node_count(), 0.0);
}

GridField::GridField(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  if (values_.size() != grid_.node_count()) {
    throw PreconditionError("field size does not match the grid node count");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw DomainError("field value is not finite");
    if (values_[i] != 0.0 && grid_.is_boundary(i)) {
      throw PreconditionError("field value on a boundary node must be zero");
    }
  }
}

void GridField::enforce_boundary() {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (grid_.is_boundary(i)) values_[i] = 0.0;
    if (!std::isfinite(values_[i])) throw NumericError("field value became non-finite");
  }
}

bool GridField::is_zero() const {
  for (double v : values_) {
    if (v != 0.0) return false;
  }
  return true;
}

std::vector<std::size_t> cell_anchors(const GridSpec& grid) {
  std::vector<std::size_t> anchors;
  const std::size_t total = grid.node_count();
  anchors.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    const auto idx = grid.multi_index(i);
    bool inside = true;
    for (int k = 0; k < grid.dimension; ++k) {
      if (idx[static_cast<std::size_t>(k)] == grid.nodes_per_axis - 1) inside = false;
    }
    if (inside) anchors.push_back(i);
  }
  return anchors;
}

CellGradient gradient_field(const GridField& u) {
  const GridSpec& grid = u.grid();
  CellGradient out;
  out.dimension = grid.dimension;
  out.anchors = cell_anchors(grid);
  out.components.resize(out.anchors.size() * static_cast<std::size_t>(grid.dimension));
  const double inv_h = 1.0 / grid.spacing();
  const auto vals = u.values();
  for (std::size_t c = 0; c < out.anchors.size(); ++c) {
    const std::size_t node = out.anchors[c];
    for (int k = 0; k < grid.dimension; ++k) {
      out.components[c * grid.dimension + k] =
          (vals[node + grid.stride(k)] - vals[node]) * inv_h;
    }
  }
  return out;
}

namespace {

double cell_modulus(const CellGradient& g, std::size_t c) {
  double sq = 0.0;
  for (int k = 0; k < g.dimension; ++k) {
    const double x = g.components[c * g.dimension + k];
    sq += x * x;
  }
  return std::sqrt(sq);
}

}  // namespace

double p_dirichlet_energy(const GridField& u, double p) {
  if (!(p > 1.0)) throw ParameterError("p-Dirichlet energy needs p > 1");
  const CellGradient g = gradient_field(u);
  std::vector<double> terms(g.anchors.size());
  for (std::size_t c = 0; c < terms.size(); ++c) {
    const double m = cell_modulus(g, c);
    terms[c] = p == 2.0 ? m * m : std::pow(m, p);
  }
  return u.grid().cell_volume() * pairwise_sum(terms);
}

std::vector<double> p_dirichlet_gradient(const GridField& u, double p, double eps_reg) {
  if (!(p > 1.0)) throw ParameterError("p-Dirichlet gradient needs p > 1");
  const GridSpec& grid = u.grid();
  const CellGradient g = gradient_field(u);
  const double inv_h = 1.0 / grid.spacing();
  std::vector<double> out(grid.node_count(), 0.0);
  // d/du_k of (1/p) sum_c |g_c|^p = sum_c |g_c|^(p-2) g_c . dg_c/du_k, per unit volume.
  for (std::size_t c = 0; c < g.anchors.size(); ++c) {
    const double m = cell_modulus(g, c);
    double w;
    if (p == 2.0) {
      w = 1.0;
    } else if (p < 2.0) {
      w = std::pow(m * m + eps_reg * eps_reg, 0.5 * (p - 2.0));
    } else {
      w = std::pow(m, p - 2.0);
    }
    const std::size_t node = g.anchors[c];
    for (int k = 0; k < grid.dimension; ++k) {
      const double flux = w * g.components[c * grid.dimension + k] * inv_h;
      out[node + grid.stride(k)] += flux;
      out[node] -= flux;
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (grid.is_boundary(i)) out[i] = 0.0;
  }
  return out;
}

double weighted_norm_p(const GridField& u, std::span<const double> a, double p) {
  if (!(p > 1.0)) throw ParameterError("weighted norm needs p > 1");
  if (a.size() != u.size()) throw PreconditionError("potential size does not match the grid");
  std::vector<double> mass(u.size());
  const auto vals = u.values();
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (a[i] < 0.0) throw PreconditionError("potential sample is negative");
    mass[i] = a[i] * std::pow(std::abs(vals[i]), p);
  }
  return p_dirichlet_energy(u, p) + integrate(u.grid(), mass);
}

double trapezoid_weight(const GridSpec& grid, std::size_t node) {
  const auto idx = grid.multi_index(node);
  double w = grid.cell_volume();
  for (int k = 0; k < grid.dimension; ++k) {
    const int i = idx[static_cast<std::size_t>(k)];
    if (i == 0 || i == grid.nodes_per_axis - 1) w *= 0.5;
  }
  return w;
}

double integrate(const GridSpec& grid, std::span<const double> w) {
  if (w.size() != grid.node_count()) {
    throw PreconditionError("integrand size does not match the grid");
  }
  std::vector<double> terms(w.size());
  const double h = grid.cell_volume();
  for (std::size_t i = 0; i < w.size(); ++i) {
    const int dist = grid.boundary_distance(i);
    terms[i] = dist == 0 ? trapezoid_weight(grid, i) * w[i] : h * w[i];
  }
  return pairwise_sum(terms);
}

double pairwise_sum(std::span<const double> terms) {
  constexpr std::size_t kBlock = 16;
  if (terms.size() <= kBlock) {
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
  }
  const std::size_t half = terms.size() / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

void write_csv(std::ostream& out, const GridField& u) {
  const GridSpec& grid = u.grid();
  static const char* kAxes[] = {"x0", "x1", "x2"};
  for (int k = 0; k < grid.dimension; ++k) out << kAxes[k] << ',';
  out << "value\n";
  char buf[64];
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto x = grid.coordinates(i);
    for (int k = 0; k < grid.dimension; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g,", x[static_cast<std::size_t>(k)]);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g\n", u[i]);
    out << buf;
  }
}

void write_csv(const std::string& path, const GridField& u) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_csv(out, u);
}

GridField read_csv(std::istream& in, const GridSpec& grid) {
  std::string line;
  if (!std::getline(in, line)) throw PreconditionError("field CSV is empty");
  std::vector<double> values;
  values.reserve(grid.node_count());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    const std::string cell = comma == std::string::npos ? line : line.substr(comma + 1);
    values.push_back(std::strtod(cell.c_str(), nullptr));
  }
  return GridField(grid, std::move(values));
}

}  // namespace pqnehari
