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

#include "mise/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mise/binary_io.hpp"
#include "mise/error.hpp"

namespace mise {

namespace {

constexpr std::string_view kCcaMagic = "MISECCA1";

Eigen::MatrixXd covariance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a.transpose() * b) / static_cast<double>(a.rows() - 1);
}

/// (C + ridge I)^{-1/2}; throws when the regularized matrix is not positive
/// definite.
Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& c, double ridge, const char* view) {
  Eigen::MatrixXd reg = c;
  reg.diagonal().array() += ridge;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reg);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double scale = std::max(lambda.cwiseAbs().maxCoeff(), 1e-300);
  if (lambda.minCoeff() <= 1e-12 * scale) {
    fail(ErrorKind::Singularity,
         std::string("covariance of view ") + view +
             " is rank deficient (smallest eigenvalue " +
             std::to_string(lambda.minCoeff()) + "); use a positive ridge");
  }
  return eig.eigenvectors() * lambda.cwiseSqrt().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

}  // namespace

double default_ridge(const Eigen::MatrixXd& x) {
  if (x.rows() < 2 || x.cols() == 0) return 0.0;
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  return 1e-4 * centered.squaredNorm() / double(x.rows() - 1) / double(x.cols());
}

CcaModel fit_cca(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int k,
                 double ridge) {
  if (x.rows() != y.rows()) {
    fail(ErrorKind::Alignment, "CCA views have " + std::to_string(x.rows()) +
                                   " and " + std::to_string(y.rows()) + " rows");
  }
  const Eigen::Index n = x.rows();
  if (n < 2) fail(ErrorKind::EmptyInput, "CCA needs at least two items");
  if (!(ridge >= 0.0)) fail(ErrorKind::Parameter, "ridge must be nonnegative");
  const int max_k = static_cast<int>(std::min({x.cols(), y.cols(), n - 1}));
  if (k <= 0) k = max_k;
  if (k > max_k) {
    fail(ErrorKind::Parameter, "k = " + std::to_string(k) +
                                   " exceeds min(d1, d2, n-1) = " + std::to_string(max_k));
  }

  CcaModel model;
  model.k = k;
  model.ridge = ridge;
  model.mean_x = x.colwise().mean().transpose();
  model.mean_y = y.colwise().mean().transpose();
  const Eigen::MatrixXd xc = x.rowwise() - model.mean_x.transpose();
  const Eigen::MatrixXd yc = y.rowwise() - model.mean_y.transpose();

  const Eigen::MatrixXd cxx_is = inverse_sqrt(covariance(xc, xc), ridge, "X");
  const Eigen::MatrixXd cyy_is = inverse_sqrt(covariance(yc, yc), ridge, "Y");
  const Eigen::MatrixXd m = cxx_is * covariance(xc, yc) * cyy_is;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  model.wx = cxx_is * svd.matrixU().leftCols(k);
  model.wy = cyy_is * svd.matrixV().leftCols(k);
  model.correlations = svd.singularValues().head(k);

  // Fix the sign of each component pair so the X weight with the largest
  // magnitude is positive.
  for (int j = 0; j < k; ++j) {
    Eigen::Index at = 0;
    model.wx.col(j).cwiseAbs().maxCoeff(&at);
    if (model.wx(at, j) < 0) {
      model.wx.col(j) *= -1.0;
      model.wy.col(j) *= -1.0;
    }
  }
  return model;
}

Eigen::MatrixXd project_x(const CcaModel& model, const Eigen::MatrixXd& x) {
  if (x.cols() != model.dim_x()) fail(ErrorKind::Dimension, "X width differs from the model");
  return (x.rowwise() - model.mean_x.transpose()) * model.wx;
}

Eigen::MatrixXd project_y(const CcaModel& model, const Eigen::MatrixXd& y) {
  if (y.cols() != model.dim_y()) fail(ErrorKind::Dimension, "Y width differs from the model");
  return (y.rowwise() - model.mean_y.transpose()) * model.wy;
}

FeatureVector fuse(const CcaModel& model, std::span<const double> x,
                   std::span<const double> y) {
  if (static_cast<Eigen::Index>(x.size()) != model.dim_x() ||
      static_cast<Eigen::Index>(y.size()) != model.dim_y()) {
    fail(ErrorKind::Dimension, "fuse expects vectors of length " +
                                   std::to_string(model.dim_x()) + " and " +
                                   std::to_string(model.dim_y()));
  }
  const Eigen::Map<const Eigen::RowVectorXd> xr(x.data(), model.dim_x());
  const Eigen::Map<const Eigen::RowVectorXd> yr(y.data(), model.dim_y());
  const Eigen::RowVectorXd px = (xr - model.mean_x.transpose()) * model.wx;
  const Eigen::RowVectorXd py = (yr - model.mean_y.transpose()) * model.wy;
  std::vector<double> out(px.data(), px.data() + px.size());
  out.insert(out.end(), py.data(), py.data() + py.size());
  return FeatureVector(FeatureKind::Fused, std::move(out));
}

std::vector<std::uint8_t> write_cca_model(const CcaModel& model) {
  ByteWriter out;
  out.put_raw(kCcaMagic);
  out.put(static_cast<std::uint64_t>(model.dim_x()));
  out.put(static_cast<std::uint64_t>(model.dim_y()));
  out.put(static_cast<std::uint64_t>(model.k));
  out.put(model.ridge);
  auto put_matrix = [&](const auto& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) out.put(static_cast<double>(m.data()[i]));
  };
  put_matrix(model.mean_x);
  put_matrix(model.mean_y);
  put_matrix(model.correlations);
  put_matrix(model.wx);
  put_matrix(model.wy);
  return std::move(out.bytes());
}

CcaModel parse_cca_model(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  in.expect(kCcaMagic, "CCA model");
  const auto d1 = static_cast<Eigen::Index>(in.get<std::uint64_t>("d1"));
  const auto d2 = static_cast<Eigen::Index>(in.get<std::uint64_t>("d2"));
  const auto k = static_cast<Eigen::Index>(in.get<std::uint64_t>("k"));
  if (k > d1 || k > d2) fail(ErrorKind::Format, "CCA header dimensions inconsistent");
  if (static_cast<std::size_t>((d1 + d2) * (k + 1) + k) * 8 + 8 > in.remaining()) {
    fail(ErrorKind::Truncation, "CCA model payload is shorter than its header declares");
  }
  CcaModel model;
  model.k = static_cast<int>(k);
  model.ridge = in.get<double>("ridge");
  auto get_matrix = [&](auto& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = in.get<double>("CCA payload");
  };
  model.mean_x.resize(d1);
  model.mean_y.resize(d2);
  model.correlations.resize(k);
  model.wx.resize(d1, k);
  model.wy.resize(d2, k);
  get_matrix(model.mean_x);
  get_matrix(model.mean_y);
  get_matrix(model.correlations);
  get_matrix(model.wx);
  get_matrix(model.wy);
  return model;
}

}  // namespace mise
