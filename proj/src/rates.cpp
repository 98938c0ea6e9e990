#include "magspec/rates.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "magspec/numerics/special.hpp"

namespace magspec {

std::string to_string(RateModel m) { return m == RateModel::log ? "log" : "linear"; }

std::vector<BigReal> rho_sequence(const std::vector<BigReal>& s, int first_index) {
  if (first_index < 1) throw DomainError("rho_sequence: indices start at 1");
  std::vector<BigReal> out;
  out.reserve(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const int j = first_index + static_cast<int>(k);
    if (!(s[k] > 0.0))
      throw DomainError("rho_sequence: entry " + std::to_string(j) + " is not positive");
    Precision p = s[k].precision();
    out.push_back(exp((log_gamma(BigReal(j + 1.0, p)) + log(s[k])) / static_cast<double>(j)));
  }
  return out;
}

namespace {

struct Fit {
  double limit, slope, inverse, residual;
};

Fit least_squares(const std::vector<double>& rho, int first_index, int j_min, int j_max, RateModel model) {
  const int w = j_max - j_min + 1;
  const int terms = model == RateModel::log ? 3 : 2;
  Eigen::MatrixXd x(w, terms);
  Eigen::VectorXd y(w);
  for (int k = 0; k < w; ++k) {
    const int j = j_min + k;
    x(k, 0) = 1.0;
    x(k, 1) = std::log(static_cast<double>(j)) / j;
    if (model == RateModel::log) x(k, 2) = 1.0 / j;
    y(k) = model == RateModel::log ? std::log(rho[j - first_index]) : rho[j - first_index];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv(terms - 1) > 1e-12 * sv(0))) throw NumericError("extrapolate: degenerate fit window");
  Eigen::VectorXd c = svd.solve(y);
  Fit f{c(0), c(1), terms == 3 ? c(2) : 0.0, (x * c - y).cwiseAbs().maxCoeff()};
  if (model == RateModel::log) f.limit = std::exp(f.limit);
  if (!std::isfinite(f.limit) || !std::isfinite(f.slope) || !std::isfinite(f.inverse))
    throw NumericError("extrapolate: non-finite fit");
  return f;
}

}  // namespace

namespace {

RateEstimate fit_window(const std::vector<double>& rho, RateWindow window, int first_index, RateModel model) {
  const int last = first_index + static_cast<int>(rho.size()) - 1;
  if (first_index < 1) throw DomainError("extrapolate: indices start at 1");
  const int min_length = model == RateModel::log ? 6 : 5;
  if (window.j_min < first_index || window.j_max > last || window.j_max - window.j_min + 1 < min_length)
    throw DomainError("extrapolate: window [" + std::to_string(window.j_min) + ", " + std::to_string(window.j_max) +
                      "] must hold at least " + std::to_string(min_length) + " indices within [" + std::to_string(first_index) + ", " +
                      std::to_string(last) + "]");
  for (int j = window.j_min; j <= window.j_max; ++j)
    if (!std::isfinite(rho[j - first_index]) || !(rho[j - first_index] > 0.0))
      throw DomainError("extrapolate: rho_" + std::to_string(j) + " is not a positive finite value");

  RateEstimate r;
  r.first_index = first_index;
  r.window = window;
  r.model = model;
  Fit full = least_squares(rho, first_index, window.j_min, window.j_max, model);
  r.limit = full.limit;
  r.slope = full.slope;
  r.inverse = full.inverse;
  r.residual = full.residual;

  const int w = window.j_max - window.j_min + 1;
  const int len = std::max(model == RateModel::log ? 4 : 3, (3 * w + 3) / 4);
  const int spare = w - len;
  for (int start : {window.j_min, window.j_min + spare / 2, window.j_min + spare}) {
    Fit sub = least_squares(rho, first_index, start, start + len - 1, model);
    r.error_estimate = std::max(r.error_estimate, std::fabs(sub.limit - full.limit));
  }
  return r;
}

}  // namespace

RateEstimate extrapolate(const std::vector<double>& rho, RateWindow window, int first_index, RateModel model) {
  RateEstimate r = fit_window(rho, window, first_index, model);
  for (double v : rho) r.rho.emplace_back(v, Precision{64});
  return r;
}

RateEstimate extrapolate(const std::vector<BigReal>& rho, RateWindow window, int first_index, RateModel model) {
  std::vector<double> d;
  d.reserve(rho.size());
  for (const auto& v : rho) d.push_back(v.to_double());
  RateEstimate r = fit_window(d, window, first_index, model);
  r.rho = rho;
  return r;
}

}  // namespace magspec
