#include "fbns/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace fbns {

MassGrid MassGrid::uniform(Index num_cells) {
  if (num_cells < 1) throw std::invalid_argument("grid needs at least 1 cell");
  Array nodes = Array::LinSpaced(num_cells + 1, 0.0, 1.0);
  nodes[0] = 0.0;
  nodes[num_cells] = 1.0;
  return from_nodes(std::move(nodes));
}

MassGrid MassGrid::from_nodes(Array nodes) {
  const Index m = nodes.size() - 1;
  if (m < 1) throw std::invalid_argument("grid needs at least 1 cell");
  if (nodes[0] != 0.0 || nodes[m] != 1.0)
    throw std::invalid_argument("mass grid must span [0,1]");
  for (Index j = 0; j < m; ++j)
    if (!(nodes[j + 1] > nodes[j]))
      throw std::invalid_argument("grid nodes must be strictly increasing");
  MassGrid g;
  g.cells = 0.5 * (nodes.head(m) + nodes.tail(m));
  g.widths = nodes.tail(m) - nodes.head(m);
  g.nodes = std::move(nodes);
  g.duals.resize(m + 1);
  g.duals[0] = 0.5 * g.widths[0];
  g.duals[m] = 0.5 * g.widths[m - 1];
  for (Index j = 1; j < m; ++j)
    g.duals[j] = 0.5 * (g.widths[j - 1] + g.widths[j]);
  return g;
}

double cell_integral(const MassGrid& g, const Array& f_cells) {
  return (g.widths * f_cells).sum();
}

double cell_integral(const MassGrid& g, const Array& f_cells, double lo,
                     double hi) {
  double acc = 0.0;
  for (Index c = 0; c < g.num_cells(); ++c) {
    const double a = std::max(lo, g.nodes[c]);
    const double b = std::min(hi, g.nodes[c + 1]);
    if (b > a) acc += (b - a) * f_cells[c];
  }
  return acc;
}

VacuumTailFit fit_vacuum_tail(const MassGrid& g, const Array& f_cells) {
  VacuumTailFit fit;
  const Index m = g.num_cells();
  if (m < 2) return fit;
  const double f1 = f_cells[m - 1];
  const double f2 = f_cells[m - 2];
  if (!(f1 > 0.0) || !(f2 > 0.0)) return fit;
  const double h1 = 1.0 - g.cells[m - 1];
  const double h2 = 1.0 - g.cells[m - 2];
  const double p = std::log(f2 / f1) / std::log(h2 / h1);
  if (!std::isfinite(p) || p <= -0.9 || p > 16.0) return fit;
  fit.exponent = p;
  fit.amplitude = f1 / std::pow(h1, p);
  fit.ok = true;
  return fit;
}

double cell_integral_vacuum_tail(const MassGrid& g, const Array& f_cells) {
  const Index m = g.num_cells();
  const VacuumTailFit fit = fit_vacuum_tail(g, f_cells);
  if (!fit.ok || m < 2) return cell_integral(g, f_cells);
  double acc = (g.widths.head(m - 1) * f_cells.head(m - 1)).sum();
  const double h = g.widths[m - 1];
  acc += fit.amplitude * std::pow(h, fit.exponent + 1.0) / (fit.exponent + 1.0);
  return acc;
}

Index vacuum_tail_cells(Index num_cells) {
  return std::min(num_cells - 1, std::max<Index>(4, num_cells / 16));
}

double cell_integral_powerlaw(const MassGrid& g, const Array& f_cells) {
  const Index m = g.num_cells();
  if (m < 3) return cell_integral(g, f_cells);
  const Index tail = vacuum_tail_cells(m);
  double acc = (g.widths.head(m - tail) * f_cells.head(m - tail)).sum();
  for (Index c = m - tail; c < m; ++c) {
    const double f1 = f_cells[c], f0 = f_cells[c - 1];
    const double h1 = 1.0 - g.cells[c], h0 = 1.0 - g.cells[c - 1];
    double piece = g.widths[c] * f1;  // midpoint fallback
    if (f1 > 0.0 && f0 > 0.0) {
      const double s = std::log(f0 / f1) / std::log(h0 / h1);
      if (std::isfinite(s) && s > -0.9 && s < 16.0) {
        const double amp = f1 / std::pow(h1, s);
        const double hl = 1.0 - g.nodes[c];      // inner edge, larger h
        const double hr = 1.0 - g.nodes[c + 1];  // outer edge
        piece = amp / (s + 1.0) *
                (std::pow(hl, s + 1.0) - std::pow(hr, s + 1.0));
      }
    }
    acc += piece;
  }
  return acc;
}

Array pow_array(const Array& a, double e) {
  if (e == 0.0) return Array::Ones(a.size());
  if (e == 1.0) return a;
  if (e == 2.0) return a.square();
  if (e == 3.0) return a.cube();
  if (e == 0.5) return a.sqrt();
  if (e == 1.5) return a * a.sqrt();
  if (e == 2.5) return a.square() * a.sqrt();
  if (e == -1.0) return a.inverse();
  double ipart;
  if (std::modf(e, &ipart) == 0.0 && std::abs(ipart) <= 16.0) {
    Array out = Array::Ones(a.size());
    Array base = a;
    long k = static_cast<long>(std::abs(ipart));
    while (k > 0) {
      if (k & 1) out *= base;
      k >>= 1;
      if (k) base = base.square();
    }
    return ipart < 0 ? out.inverse().eval() : out;
  }
  return a.pow(e);
}

Array ddx_nodes_to_cells(const MassGrid& g, const Array& f_nodes) {
  const Index m = g.num_cells();
  return (f_nodes.tail(m) - f_nodes.head(m)) / g.widths;
}

Array ddx_cells_to_nodes(const MassGrid& g, const Array& f_cells) {
  const Index m = g.num_cells();
  Array d(m + 1);
  for (Index j = 1; j < m; ++j)
    d[j] = (f_cells[j] - f_cells[j - 1]) / (g.cells[j] - g.cells[j - 1]);
  d[0] = (f_cells[1] - f_cells[0]) / (g.cells[1] - g.cells[0]);
  d[m] = (f_cells[m - 1] - f_cells[m - 2]) / (g.cells[m - 1] - g.cells[m - 2]);
  return d;
}

Array node_to_cell_average(const Array& f_nodes) {
  const Index m = f_nodes.size() - 1;
  return 0.5 * (f_nodes.head(m) + f_nodes.tail(m));
}

Array cell_to_node_average(const Array& f_cells) {
  const Index m = f_cells.size();
  Array v(m + 1);
  v[0] = f_cells[0];
  v[m] = f_cells[m - 1];
  for (Index j = 1; j < m; ++j) v[j] = 0.5 * (f_cells[j - 1] + f_cells[j]);
  return v;
}

double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double cutoff_weight(double x, double x_cut, double ramp) {
  if (ramp <= 0.0) return x <= x_cut ? 1.0 : 0.0;
  return 1.0 - smoothstep((x - (x_cut - ramp)) / ramp);
}

}  // namespace fbns
