#include "fbns/params.hpp"

#include <algorithm>
#include <cmath>

namespace fbns {

namespace {

void require_lt(AdmissibilityReport& rep, const std::string& id, double lhs,
                double rhs) {
  if (!(lhs < rhs)) rep.violations.push_back({id, lhs, rhs});
}

}  // namespace

AdmissibilityReport validate_params(const Params& p) {
  AdmissibilityReport rep;

  const double fields[] = {p.gamma, p.theta,       p.sigma,
                           p.a0,    p.rho_star_lo, p.rho_star_hi};
  for (double v : fields) {
    if (!std::isfinite(v)) {
      rep.violations.push_back({"finite", v, 0.0});
      rep.admissible = false;
      return rep;
    }
  }

  const double n = static_cast<double>(p.dim);
  const double beta = p.beta();
  const double theta_lower = (n - 1.0) / n;
  const double beta_lower = 1.0 / (2.0 * p.gamma);
  const double beta_upper =
      std::min(1.0 / (2.0 * p.theta), 1.0 / (1.0 + p.theta));
  const double m_lower =
      std::max(1.0 / (1.0 + beta * p.theta - beta), 1.0 / (4.0 - 4.0 * beta));

  rep.derived["beta"] = beta;
  rep.derived["theta_lower"] = theta_lower;
  rep.derived["beta_lower"] = beta_lower;
  rep.derived["beta_upper"] = beta_upper;
  rep.derived["m_lower"] = m_lower;

  if (p.dim != 2 && p.dim != 3)
    rep.violations.push_back({"structure.dim", static_cast<double>(p.dim), 0});
  require_lt(rep, "structure.sigma_positive", 0.0, p.sigma);
  require_lt(rep, "structure.a0_positive", 0.0, p.a0);
  require_lt(rep, "structure.pinch_lo_positive", 0.0, p.rho_star_lo);
  if (!(p.rho_star_lo <= p.rho_star_hi))
    rep.violations.push_back(
        {"structure.pinch_ordered", p.rho_star_lo, p.rho_star_hi});

  require_lt(rep, "A1.gamma", 1.0, p.gamma);
  require_lt(rep, "A1.theta_lower", theta_lower, p.theta);
  require_lt(rep, "A1.theta_upper", p.theta, p.gamma);

  require_lt(rep, "A2.beta_lower", beta_lower, beta);
  require_lt(rep, "A2.beta_upper", beta, beta_upper);
  require_lt(rep, "A2.beta_theta", beta * (p.theta - 1.0), 1.0 / 3.0);

  require_lt(rep, "A3.m_positive", 0.0, static_cast<double>(p.m));
  require_lt(rep, "A3.m_lower", m_lower, static_cast<double>(p.m));

  rep.admissible = rep.violations.empty();
  return rep;
}

}  // namespace fbns
