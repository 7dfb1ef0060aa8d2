#pragma once

#include <string>

#include "bitflip/drift.hpp"

namespace bitflip {

struct EstimatorResult {
  double mttf = 0.0;
  std::string method;  // kish | nobile | siegert
  // input echo; the two primary inputs are named in `primary`, the rest are
  // derived through sigma_w^2 = 2 sigma_vv^2 / tau
  double delta_vv = 0.0;
  double sigma_vv = 0.0;
  double tau = 0.0;
  double sigma_w = 0.0;
  std::string primary;
  bool overflow_to_infinity = false;
  bool truncation_warning = false;
};

// mttf = sqrt(3)/2 * 2 pi tau * exp(delta^2 / (2 sigma^2)), evaluated in log
// space; +inf with the overflow flag when exp overflows.
EstimatorResult kish_mttf(double delta_vv, double sigma_vv, double tau);

// OU mean first passage, x2-corrected:
// mttf = 2 tau sqrt(pi) int_0^{delta/(sigma sqrt 2)} e^{u^2} (1 + erf u) du.
EstimatorResult nobile_mttf(double delta_vv, double sigma_vv, double tau);

// Exact mean first passage over the tabulated potential, x2-corrected:
// mttf = 2 * (2/sigma_w^2) int_0^delta e^{2U(y)/sigma_w^2}
//            [ int_{y_lo}^{y} e^{-2U(z)/sigma_w^2} dz ] dy,
// y_lo = the table's lower edge (-10 sigma_vv from extend_negative).
// Trapezoid on the table grid with substeps capped at delta_vv/1000.
// truncation_warning set when the inner integrand at y_lo exceeds 1e-8 of its
// peak (lower cutoff too tight).
EstimatorResult siegert_mttf(const PotentialTable& u, double sigma_w,
                             double delta_vv);

}  // namespace bitflip
