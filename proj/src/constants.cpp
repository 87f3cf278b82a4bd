#include "rangelab/constants.hpp"

#include <cmath>
#include <numbers>

#include "rangelab/error.hpp"

namespace rangelab {

ConstantsReport constants_report(const StepDistribution& dist, double m_hat, double m_hat_uncertainty) {
  if (!(m_hat > 0.0)) throw PreconditionError("constants_report: M must be positive");
  ConstantsReport rep;
  rep.dist_name = dist.name();
  rep.det_gamma = dist.det_covariance();
  rep.two_pi_sqrt_det = dist.two_pi_sqrt_det();
  rep.m_hat = m_hat;
  rep.m_hat_uncertainty = m_hat_uncertainty;
  rep.weinstein = 2.0 * m_hat;
  const double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
  const double sqrt_det = std::sqrt(rep.det_gamma);
  for (double factor : {1.0, 2.0}) {
    KappaCandidate c;
    c.identification = factor == 1.0 ? "kappa^4 = M" : "kappa^4 = 2M";
    c.kappa4 = factor * m_hat;
    c.kappa4_uncertainty = factor * m_hat_uncertainty;
    c.theta = four_pi2 / (sqrt_det * c.kappa4);
    c.theta_inverse = sqrt_det * c.kappa4 / four_pi2;
    c.product = c.theta * c.theta_inverse;
    rep.candidates.push_back(c);
  }
  rep.open_items = {
      "L = exp(-1 - C): not computable here; C is defined through a Brownian self-intersection limit",
      "C_2 = L is stated; C_1 = L is conjectured without proof",
      "kappa identification: the supremum M equals kappa^4/2 by direct scaling, while the variational "
      "step in the lower-tail proof reads as kappa^4; both candidates are reported",
  };
  return rep;
}

nlohmann::json constants_to_json(const ConstantsReport& r) {
  nlohmann::json cands = nlohmann::json::array();
  for (const auto& c : r.candidates)
    cands.push_back({{"identification", c.identification},
                     {"kappa4", c.kappa4},
                     {"kappa4_uncertainty", c.kappa4_uncertainty},
                     {"Theta", c.theta},
                     {"Theta_inverse", c.theta_inverse},
                     {"Theta_times_inverse", c.product}});
  return {{"distribution", r.dist_name},
          {"det_gamma", r.det_gamma},
          {"two_pi_sqrt_det_gamma", r.two_pi_sqrt_det},
          {"M_hat", r.m_hat},
          {"M_hat_uncertainty", r.m_hat_uncertainty},
          {"weinstein_quotient_at_optimizer", r.weinstein},
          {"kappa_candidates", cands},
          {"L", "not computed"},
          {"C", "not computed"},
          {"C1", "open"},
          {"C2", "equals L (not computed)"},
          {"open_items", r.open_items}};
}

}  // namespace rangelab
