#pragma once

#include <Eigen/Core>

namespace fbns {

using Array = Eigen::ArrayXd;
using Index = Eigen::Index;

/// Fixed mass-coordinate grid on [0,1]. The layout is staggered: velocity and
/// radius live on nodes, density and pressure-like quantities on cell centers,
/// so density is never sampled at x=1 where it vanishes.
struct MassGrid {
  Array nodes;   ///< M+1 node coordinates, nodes[0]=0, nodes[M]=1
  Array cells;   ///< M cell midpoints
  Array widths;  ///< M cell widths, summing to 1
  Array duals;   ///< M+1 dual widths around nodes, one-sided at the ends

  Index num_cells() const { return cells.size(); }
  Index num_nodes() const { return nodes.size(); }
  const Array& node_weights() const { return duals; }

  static MassGrid uniform(Index num_cells);
  static MassGrid from_nodes(Array nodes);
};

/// Composite midpoint rule over cell-centered values.
double cell_integral(const MassGrid& g, const Array& f_cells);

/// Midpoint rule restricted to [lo,hi], end cells weighted by overlap.
double cell_integral(const MassGrid& g, const Array& f_cells, double lo,
                     double hi);

/// Local power-law model f ~ amplitude * (1-x)^exponent fitted to the last
/// two cell values; ok=false when the values do not support a fit.
struct VacuumTailFit {
  double amplitude = 0.0;
  double exponent = 0.0;
  bool ok = false;
};

VacuumTailFit fit_vacuum_tail(const MassGrid& g, const Array& f_cells);

/// Midpoint rule with the final cell replaced by the closed-form integral of
/// the fitted power law. Keeps second-order accuracy for integrands that
/// behave like a fractional power of the vacuum distance near x=1.
double cell_integral_vacuum_tail(const MassGrid& g, const Array& f_cells);

/// Number of cells treated as the vacuum tail by the product rule below;
/// grows with the grid so the midpoint error of the remaining singular
/// region stays second order.
Index vacuum_tail_cells(Index num_cells);

/// Midpoint rule away from the interface; on the last vacuum_tail_cells
/// cells each cell is integrated in closed form against the power law
/// f ~ A (1-x)^s fitted from the cell and its inner neighbor. Exact for
/// pure powers of 1-x, falls back to midpoint cell by cell where the data
/// does not support a fit.
double cell_integral_powerlaw(const MassGrid& g, const Array& f_cells);

/// Elementwise power with fast paths for the small integer and half-integer
/// exponents the model actually uses.
Array pow_array(const Array& a, double e);

/// Difference of node values across each cell.
Array ddx_nodes_to_cells(const MassGrid& g, const Array& f_nodes);

/// Centered difference of cell values at interior nodes; at the two end
/// nodes the one-sided slope through the adjacent pair of cells.
Array ddx_cells_to_nodes(const MassGrid& g, const Array& f_cells);

/// Arithmetic averages between the two staggered locations.
Array node_to_cell_average(const Array& f_nodes);
Array cell_to_node_average(const Array& f_cells);

/// C^2 quintic smoothstep: 0 for t<=0, 1 for t>=1.
double smoothstep(double t);

/// Cutoff profile equal to 1 on [0, x_cut-ramp], 0 beyond x_cut, with a
/// quintic ramp in between.
double cutoff_weight(double x, double x_cut, double ramp);

}  // namespace fbns
