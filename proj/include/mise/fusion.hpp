// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Two-view fusion by regularized canonical correlation analysis.

#ifndef MISE_FUSION_HPP
#define MISE_FUSION_HPP

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mise/feature.hpp"

namespace mise {

struct CcaModel {
  Eigen::MatrixXd wx;            // d1 x k
  Eigen::MatrixXd wy;            // d2 x k
  Eigen::VectorXd correlations;  // descending, in [0, 1]
  Eigen::VectorXd mean_x;
  Eigen::VectorXd mean_y;
  int k = 0;
  double ridge = 0.0;

  Eigen::Index dim_x() const noexcept { return wx.rows(); }
  Eigen::Index dim_y() const noexcept { return wy.rows(); }
};

/// 1e-4 * trace(Cov(X)) / d, the scale-aware default ridge.
double default_ridge(const Eigen::MatrixXd& x);

/// Rows of `x` and `y` are the same items. Solves the CCA eigenproblem on
/// centered data with within-set covariances Cxx + ridge*I and Cyy + ridge*I.
/// `k` <= 0 selects min(d1, d2, n-1).
CcaModel fit_cca(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int k,
                 double ridge);

/// Canonical projections of whole matrices, n x k.
Eigen::MatrixXd project_x(const CcaModel& model, const Eigen::MatrixXd& x);
Eigen::MatrixXd project_y(const CcaModel& model, const Eigen::MatrixXd& y);

/// [wx^T (x - mean_x) | wy^T (y - mean_y)], length 2k.
FeatureVector fuse(const CcaModel& model, std::span<const double> x,
                   std::span<const double> y);

std::vector<std::uint8_t> write_cca_model(const CcaModel& model);
CcaModel parse_cca_model(std::span<const std::uint8_t> bytes);

}  // namespace mise

#endif  // MISE_FUSION_HPP
