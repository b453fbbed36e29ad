/*
   Copyright 2026 The critwalk Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "critwalk/stats.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "critwalk/errors.hpp"

namespace critwalk {

double RunningStats::standard_error() const {
  return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

double quantile(std::vector<double> values, double q) {
  if (values.empty()) {
    throw ValidationError("quantile of an empty sample");
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    throw ValidationError("quantile level outside [0, 1]");
  }
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

namespace {

LinearFit weighted_fit(std::span<const double> x, std::span<const double> y,
                       const Eigen::VectorXd& w, bool rescale) {
  const auto n = static_cast<Eigen::Index>(x.size());
  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  if (*xmin == *xmax) {
    throw ValidationError("least squares: all x values are equal");
  }
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = x[i];
    rhs[i] = y[i];
  }
  const Eigen::MatrixXd normal = design.transpose() * w.asDiagonal() * design;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
  const Eigen::Vector2d beta = ldlt.solve(design.transpose() * w.asDiagonal() * rhs);
  const Eigen::VectorXd resid = rhs - design * beta;
  Eigen::Matrix2d cov = ldlt.solve(Eigen::Matrix2d::Identity());
  if (rescale) {
    cov *= resid.dot(w.asDiagonal() * resid) / static_cast<double>(n - 2);
  }
  LinearFit fit;
  fit.intercept = beta[0];
  fit.slope = beta[1];
  fit.intercept_se = std::sqrt(std::max(0.0, cov(0, 0)));
  fit.slope_se = std::sqrt(std::max(0.0, cov(1, 1)));
  const double wsum = w.sum();
  const double ybar = w.dot(rhs) / wsum;
  const double ss_tot = (rhs.array() - ybar).square().matrix().dot(w);
  const double ss_res = resid.array().square().matrix().dot(w);
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.points = x.size();
  return fit;
}

}  // namespace

LinearFit ols_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ValidationError("ols_fit: length mismatch");
  }
  if (x.size() < 3) {
    throw ValidationError("ols_fit: needs at least three points");
  }
  return weighted_fit(x, y, Eigen::VectorXd::Ones(static_cast<Eigen::Index>(x.size())), true);
}

LinearFit wls_fit(std::span<const double> x, std::span<const double> y,
                  std::span<const double> weights) {
  if (x.size() != y.size() || x.size() != weights.size()) {
    throw ValidationError("wls_fit: length mismatch");
  }
  if (x.size() < 2) {
    throw ValidationError("wls_fit: needs at least two points");
  }
  Eigen::VectorXd w(static_cast<Eigen::Index>(weights.size()));
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw ValidationError("wls_fit: weights must be positive and finite");
    }
    w[static_cast<Eigen::Index>(i)] = weights[i];
  }
  return weighted_fit(x, y, w, false);
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0 || successes > trials) {
    throw ValidationError("wilson_interval: need 0 <= successes <= trials, trials > 0");
  }
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (phat + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double proportion_se(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) {
    return 0.0;
  }
  const double phat = static_cast<double>(successes) / static_cast<double>(trials);
  return std::sqrt(phat * (1.0 - phat) / static_cast<double>(trials));
}

}  // namespace critwalk
