#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rangelab/kappa.hpp"
#include "rangelab/step_distribution.hpp"

namespace rangelab {

/// One reading of how the solver's supremum M relates to kappa(2,2)^4.
struct KappaCandidate {
  std::string identification;  // "kappa^4 = M" or "kappa^4 = 2M"
  double kappa4 = 0.0;
  double kappa4_uncertainty = 0.0;
  double theta = 0.0;          // (2 pi)^2 det(Gamma)^{-1/2} kappa^{-4}
  double theta_inverse = 0.0;  // (2 pi)^{-2} det(Gamma)^{1/2} kappa^4
  double product = 0.0;        // theta * theta_inverse
};

struct ConstantsReport {
  std::string dist_name;
  double det_gamma = 0.0;
  double two_pi_sqrt_det = 0.0;
  double m_hat = 0.0;
  double m_hat_uncertainty = 0.0;
  double weinstein = 0.0;  // sharp Gagliardo-Nirenberg ratio at the optimizer
  std::vector<KappaCandidate> candidates;
  std::vector<std::string> open_items;
};

ConstantsReport constants_report(const StepDistribution& dist, double m_hat, double m_hat_uncertainty);

nlohmann::json constants_to_json(const ConstantsReport& report);

}  // namespace rangelab
