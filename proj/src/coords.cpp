#include "fbns/coords.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fbns {

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa,
                double b, double fb, double m, double fm, double whole,
                double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(a, fa, b, fb, fm);
  return adaptive(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

double mass_coordinate(double r, const std::function<double(double)>& rho_of_r,
                       const Params& p) {
  if (r < 0.0 || r > p.a0)
    throw std::invalid_argument("mass_coordinate: r outside [0, a0]");
  if (r == 0.0) return 0.0;
  const int n = p.dim;
  return integrate(
      [&](double y) {
        const double rho = rho_of_r(y);
        if (!(rho >= 0.0))
          throw std::invalid_argument("mass_coordinate: negative density");
        return rho * std::pow(y, n - 1);
      },
      0.0, r);
}

Array node_radii_from_density(const MassGrid& g, const Array& rho_cells,
                              const Params& p) {
  const Index m = g.num_cells();
  const int n = p.dim;
  for (Index c = 0; c + 1 < m; ++c)
    if (!(rho_cells[c] > 0.0))
      throw std::invalid_argument("node_radii_from_density: nonpositive "
                                  "interior density");
  Array rn(m + 1);  // r^N at nodes
  rn[0] = 0.0;
  for (Index c = 0; c + 1 < m; ++c)
    rn[c + 1] = rn[c] + n * g.widths[c] / rho_cells[c];

  // Vacuum cell: 1/rho ~ (1-x)^{-q} with q in (0,1); integrate the fit.
  const VacuumTailFit fit = fit_vacuum_tail(g, rho_cells);
  const double h = g.widths[m - 1];
  if (fit.ok && fit.exponent < 1.0) {
    rn[m] = rn[m - 1] + n * std::pow(h, 1.0 - fit.exponent) /
                            (fit.amplitude * (1.0 - fit.exponent));
  } else {
    if (!(rho_cells[m - 1] > 0.0))
      throw std::invalid_argument("node_radii_from_density: nonpositive "
                                  "boundary density");
    rn[m] = rn[m - 1] + n * h / rho_cells[m - 1];
  }
  return rn.pow(1.0 / n);
}

double radius_from_mass(double x, const LagrangianState& s, const Params& p) {
  if (x < 0.0 || x > 1.0)
    throw std::invalid_argument("radius_from_mass: x outside [0,1]");
  const MassGrid& g = s.g();
  const Array rnodes = node_radii_from_density(g, s.rho, p);
  const Index m = g.num_cells();
  const int n = p.dim;
  if (x == 0.0) return 0.0;
  if (x == 1.0) return rnodes[m];

  // locate the cell containing x
  Index c = 0;
  while (c + 1 < m && x > g.nodes[c + 1]) ++c;

  const double rn_lo = std::pow(rnodes[c], n);
  if (c < m - 1)
    return std::pow(rn_lo + n * (x - g.nodes[c]) / s.rho[c], 1.0 / n);

  // last cell: invert the fitted power law
  const VacuumTailFit fit = fit_vacuum_tail(g, s.rho);
  const double rn_hi = std::pow(rnodes[m], n);
  if (fit.ok && fit.exponent < 1.0) {
    const double q = fit.exponent;
    return std::pow(rn_hi - n * std::pow(1.0 - x, 1.0 - q) /
                                (fit.amplitude * (1.0 - q)),
                    1.0 / n);
  }
  return std::pow(rn_lo + n * (x - g.nodes[c]) / s.rho[c], 1.0 / n);
}

namespace {

// piecewise-linear interpolation on an increasing knot table
double lerp_table(const Array& xs, const Array& ys, double x) {
  const Index n = xs.size();
  if (x <= xs[0]) return ys[0];
  if (x >= xs[n - 1]) return ys[n - 1];
  Index lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const Index mid = (lo + hi) / 2;
    (xs[mid] <= x ? lo : hi) = mid;
  }
  const double t = (x - xs[lo]) / (xs[lo + 1] - xs[lo]);
  return ys[lo] + t * (ys[lo + 1] - ys[lo]);
}

}  // namespace

EulerianField to_eulerian(const LagrangianState& s, Index n_out) {
  if (n_out < 2) throw std::invalid_argument("to_eulerian: n_out < 2");
  const Index m = s.num_cells();
  for (Index j = 0; j < m; ++j)
    if (!(s.r[j + 1] > s.r[j]))
      throw std::invalid_argument("to_eulerian: radii not increasing");

  // density knots: flat at the center, cell centers, zero at the interface
  Array rho_knot_r(m + 2), rho_knot_v(m + 2);
  rho_knot_r[0] = 0.0;
  rho_knot_v[0] = s.rho[0];
  for (Index c = 0; c < m; ++c) {
    rho_knot_r[c + 1] = 0.5 * (s.r[c] + s.r[c + 1]);
    rho_knot_v[c + 1] = s.rho[c];
  }
  rho_knot_r[m + 1] = s.a;
  rho_knot_v[m + 1] = 0.0;

  EulerianField f;
  f.a = s.a;
  f.radii = Array::LinSpaced(n_out, 0.0, s.a);
  f.rho.resize(n_out);
  f.u.resize(n_out);
  for (Index i = 0; i < n_out; ++i) {
    f.rho[i] = lerp_table(rho_knot_r, rho_knot_v, f.radii[i]);
    f.u[i] = lerp_table(s.r, s.u, f.radii[i]);
  }
  f.rho[n_out - 1] = 0.0;
  f.u[0] = 0.0;
  return f;
}

namespace {

// int_0^h s^sigma (a - s)^{N-1} ds, expanded exactly for integer N
double power_tail_moment(double a, double h, double sigma, int n) {
  double acc = 0.0;
  double binom = 1.0;
  for (int i = 0; i <= n - 1; ++i) {
    const double term = binom * std::pow(a, n - 1 - i) *
                        std::pow(h, sigma + 1 + i) / (sigma + 1 + i);
    acc += (i % 2 == 0 ? term : -term);
    binom = binom * (n - 1 - i) / (i + 1);
  }
  return acc;
}

}  // namespace

double eulerian_mass(const LagrangianState& s, const Params& p) {
  const Index m = s.num_cells();
  const int n = p.dim;
  double acc = 0.0;
  for (Index c = 0; c + 1 < m; ++c)
    acc += s.rho[c] * (std::pow(s.r[c + 1], n) - std::pow(s.r[c], n)) / n;

  // vacuum cell: rho ~ A (a-r)^sf fitted from the last two cells
  const double h1 = s.a - 0.5 * (s.r[m - 1] + s.r[m]);
  const double h2 = s.a - 0.5 * (s.r[m - 2] + s.r[m - 1]);
  const double rho1 = s.rho[m - 1], rho2 = s.rho[m - 2];
  const double hcell = s.a - s.r[m - 1];
  if (rho1 > 0.0 && rho2 > 0.0 && h1 > 0.0 && h2 > h1) {
    const double sf = std::log(rho2 / rho1) / std::log(h2 / h1);
    if (std::isfinite(sf) && sf > -0.9 && sf < 16.0) {
      const double amp = rho1 / std::pow(h1, sf);
      acc += amp * power_tail_moment(s.a, hcell, sf, n);
      return acc;
    }
  }
  acc += s.rho[m - 1] * (std::pow(s.a, n) - std::pow(s.r[m - 1], n)) / n;
  return acc;
}

double vacuum_rate_slope(const LagrangianState& s, const Params&) {
  const EulerianField f = to_eulerian(s, 2 * s.num_cells());
  const double lo = 0.01 * s.a, hi = 0.15 * s.a;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long cnt = 0;
  for (Index i = 0; i < f.radii.size(); ++i) {
    const double d = s.a - f.radii[i];
    if (d < lo || d > hi || !(f.rho[i] > 0.0)) continue;
    const double lx = std::log(d), ly = std::log(f.rho[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  if (cnt < 3) throw std::runtime_error("vacuum_rate_slope: too few samples");
  const double den = cnt * sxx - sx * sx;
  return (cnt * sxy - sx * sy) / den;
}

}  // namespace fbns
