#pragma once

#include <string>
#include <vector>

#include "magspec/numerics/bigreal.hpp"

namespace magspec {

// rho_j = exp((ln Gamma(j+1) + ln s_j) / j) in the log domain. The first entry has index
// `first_index` (>= 1); non-positive entries throw DomainError.
std::vector<BigReal> rho_sequence(const std::vector<BigReal>& s, int first_index = 1);

struct RateWindow {
  int j_min = 0;
  int j_max = 0;  // inclusive
};

// linear: rho_j ~ L + c ln j / j.
// log: ln rho_j ~ ln L + c ln j / j + d / j, exact for s_j = C L^j j^a / j!, so scaling s
// by a constant leaves L unchanged.
enum class RateModel { linear, log };
std::string to_string(RateModel m);

struct RateEstimate {
  std::vector<BigReal> rho;       // the input sequence, as fitted
  int first_index = 1;
  RateWindow window;
  RateModel model = RateModel::linear;
  double limit = 0.0;             // L
  double slope = 0.0;             // c
  double inverse = 0.0;           // d, log model only
  double error_estimate = 0.0;    // max |L_sub - L| over three staggered sub-windows
  double residual = 0.0;          // max abs residual of the fit (in ln rho for the log model)
};

// Least squares over the window (at least 5 indices). Sub-windows have length ceil(3w/4),
// aligned left, centered and right.
RateEstimate extrapolate(const std::vector<double>& rho, RateWindow window, int first_index = 1,
                         RateModel model = RateModel::linear);
RateEstimate extrapolate(const std::vector<BigReal>& rho, RateWindow window, int first_index = 1,
                         RateModel model = RateModel::linear);

}  // namespace magspec
