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

#include "mise/recsys.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "mise/binary_io.hpp"
#include "mise/error.hpp"

namespace mise {

InteractionMatrix::InteractionMatrix(int n_users, int n_items, std::vector<Rating> entries)
    : n_users_(n_users), n_items_(n_items), entries_(std::move(entries)) {
  if (n_users < 0 || n_items < 0) fail(ErrorKind::Dimension, "negative matrix size");
  std::sort(entries_.begin(), entries_.end(), [](const Rating& a, const Rating& b) {
    return std::tie(a.user, a.item) < std::tie(b.user, b.item);
  });
  row_start_.assign(static_cast<std::size_t>(n_users) + 1, 0);
  cells_.reserve(entries_.size());
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const Rating& r = entries_[k];
    if (r.user < 0 || r.user >= n_users || r.item < 0 || r.item >= n_items) {
      fail(ErrorKind::Dimension, "rating (" + std::to_string(r.user) + ", " +
                                     std::to_string(r.item) + ") outside the matrix");
    }
    if (!(r.value >= 0.5 && r.value <= 5.0)) {
      fail(ErrorKind::Parameter, "rating " + std::to_string(r.value) + " outside [0.5, 5]");
    }
    if (k > 0 && entries_[k - 1].user == r.user && entries_[k - 1].item == r.item) {
      fail(ErrorKind::Duplicate, "duplicate rating for user " + std::to_string(r.user) +
                                     ", item " + std::to_string(r.item));
    }
    cells_.push_back({r.item, r.value});
    ++row_start_[static_cast<std::size_t>(r.user) + 1];
  }
  std::partial_sum(row_start_.begin(), row_start_.end(), row_start_.begin());
}

std::span<const ItemRating> InteractionMatrix::row(int user) const {
  if (user < 0 || user >= n_users_) {
    fail(ErrorKind::MissingUser, "user index " + std::to_string(user) + " not in matrix");
  }
  const auto u = static_cast<std::size_t>(user);
  return std::span(cells_).subspan(row_start_[u], row_start_[u + 1] - row_start_[u]);
}

bool InteractionMatrix::contains(int user, int item) const {
  const auto r = row(user);
  return std::binary_search(r.begin(), r.end(), ItemRating{item, 0.0},
                            [](const ItemRating& a, const ItemRating& b) {
                              return a.item < b.item;
                            });
}

IdIndex::IdIndex(std::vector<std::int64_t> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  for (std::size_t i = 0; i < ids_.size(); ++i) index_.emplace(ids_[i], static_cast<int>(i));
}

int IdIndex::find(std::int64_t id) const noexcept {
  const auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& values) {
  Eigen::MatrixXd out = values;
  const double n = static_cast<double>(values.rows());
  if (values.rows() == 0) return out;
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    const double mean = values.col(j).sum() / n;
    out.col(j).array() -= mean;
    const double sd = std::sqrt(out.col(j).squaredNorm() / n);
    if (sd > 1e-12 * std::max(1.0, std::fabs(mean))) {
      out.col(j) /= sd;
    } else {
      out.col(j).setZero();
    }
  }
  return out;
}

void TrainConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) fail(ErrorKind::Parameter, "alpha must lie in [0, 1]");
  if (!(gamma >= 0.0)) fail(ErrorKind::Parameter, "gamma must be >= 0");
  if (!(learning_rate > 0.0)) fail(ErrorKind::Parameter, "learning rate must be > 0");
  if (epochs < 1) fail(ErrorKind::Parameter, "epochs must be >= 1");
  if (feature_steps < 0) fail(ErrorKind::Parameter, "feature steps must be >= 0");
}

BprSampler::BprSampler(const InteractionMatrix& ratings, double relevance_threshold)
    : ratings_(&ratings) {
  for (int u = 0; u < ratings.n_users(); ++u) {
    for (const auto& cell : ratings.row(u)) {
      if (cell.value >= relevance_threshold) positives_.emplace_back(u, cell.item);
    }
  }
}

bool BprSampler::sample(std::mt19937_64& rng, int& user, int& positive,
                        int& negative) const {
  std::uniform_int_distribution<std::size_t> pick(0, positives_.size() - 1);
  std::tie(user, positive) = positives_[pick(rng)];
  const int n_items = ratings_->n_items();
  if (static_cast<int>(ratings_->row(user).size()) >= n_items) return false;
  std::uniform_int_distribution<int> item(0, n_items - 1);
  do {
    negative = item(rng);
  } while (ratings_->contains(user, negative));
  return true;
}

namespace {

constexpr std::size_t kMonitorTriples = 4096;

double log1p_exp_neg(double x) {
  // -ln sigmoid(x) = ln(1 + e^{-x})
  return x > 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

struct FeatureTerm {
  Eigen::MatrixXd standardized;  // items x d
  Eigen::MatrixXd gram;          // items x items
  double scale = 0.0;            // 1 / (n_items * d_effective)
};

FeatureTerm make_feature_term(const FeatureMatrix& features, int n_items) {
  if (features.values.rows() != n_items) {
    fail(ErrorKind::Alignment, "feature matrix has " +
                                   std::to_string(features.values.rows()) +
                                   " rows for " + std::to_string(n_items) + " items");
  }
  if (!features.values.allFinite()) {
    fail(ErrorKind::Parameter, "feature matrix contains non-finite entries");
  }
  FeatureTerm term;
  term.standardized = standardize_columns(features.values);
  Eigen::Index live = 0;
  for (Eigen::Index j = 0; j < term.standardized.cols(); ++j) {
    live += term.standardized.col(j).squaredNorm() > 0.0;
  }
  if (live > 0 && n_items > 0) {
    term.gram = term.standardized * term.standardized.transpose();
    term.scale = 1.0 / (double(n_items) * double(live));
  }
  return term;
}

SimilarityModel train(const InteractionMatrix& ratings, const FeatureTerm* features,
                      const TrainConfig& cfg) {
  cfg.validate();
  if (ratings.nnz() == 0) fail(ErrorKind::EmptyInput, "no ratings to train on");
  const int n = ratings.n_items();

  SimilarityModel model;
  model.config = cfg;
  model.s = Eigen::MatrixXd::Zero(n, n);
  model.feature_dim = features ? static_cast<int>(features->standardized.cols()) : 0;
  Eigen::MatrixXd& s = model.s;

  const BprSampler sampler(ratings, cfg.relevance_threshold);
  const std::size_t samples = sampler.positive_count() == 0 ? 0
                              : cfg.samples_per_epoch > 0   ? cfg.samples_per_epoch
                                                            : sampler.positive_count();
  const bool use_features = features && cfg.alpha < 1.0 && features->scale > 0.0 &&
                            cfg.feature_steps > 0;

  double feature_step = 0.0;
  if (use_features) {
    const double lipschitz =
        2.0 * (1.0 - cfg.alpha) * features->scale * features->gram.trace() + 2.0 * cfg.gamma;
    // An epoch of `samples` SGD steps moves about as far as one full-gradient
    // step of lr * samples on the mean BPR loss; match it.
    feature_step = cfg.learning_rate * double(std::max<std::size_t>(samples, 1));
    if (lipschitz > 0.0) feature_step = std::min(feature_step, 1.0 / lipschitz);
  }

  // The reported BPR term is measured on a fixed set of triples drawn from
  // a separate stream, so the loss curve is not dominated by sampling noise.
  std::vector<std::array<int, 3>> monitor;
  if (samples > 0) {
    std::mt19937_64 monitor_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    for (std::size_t k = 0; k < kMonitorTriples; ++k) {
      int u, i, j;
      if (sampler.sample(monitor_rng, u, i, j)) monitor.push_back({u, i, j});
    }
  }

  std::mt19937_64 rng(cfg.seed);
  const double lr = cfg.learning_rate;
  const double decay = 2.0 * cfg.gamma;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t step = 0; step < samples; ++step) {
      int u, i, j;
      if (!sampler.sample(rng, u, i, j)) continue;
      const auto row = ratings.row(u);
      double x = 0.0;
      for (const auto& cell : row) x += cell.value * (s(cell.item, i) - s(cell.item, j));
      if (!std::isfinite(x)) {
        fail(ErrorKind::Divergence, "non-finite ranking margin in epoch " +
                                        std::to_string(epoch + 1) +
                                        "; lower the learning rate");
      }
      const double g = cfg.alpha / (1.0 + std::exp(x));
      for (const auto& cell : row) {
        const int l = cell.item;
        if (l != i) s(l, i) += lr * (g * cell.value - decay * s(l, i));
        s(l, j) += lr * (-g * cell.value - decay * s(l, j));  // j is unrated, so l != j
      }
    }

    if (use_features) {
      const double w = 2.0 * (1.0 - cfg.alpha) * features->scale;
      for (int k = 0; k < cfg.feature_steps; ++k) {
        const Eigen::MatrixXd grad = w * (features->gram * s - features->gram) + decay * s;
        s.noalias() -= feature_step * grad;
        s.diagonal().setZero();
      }
    }
    if (!s.allFinite()) {
      fail(ErrorKind::Divergence, "similarity matrix diverged in epoch " +
                                      std::to_string(epoch + 1) +
                                      "; lower the learning rate");
    }

    double loss = cfg.gamma * s.squaredNorm();
    if (!monitor.empty()) {
      double bpr = 0.0;
      for (const auto& [u, i, j] : monitor) {
        double x = 0.0;
        for (const auto& cell : ratings.row(u)) x += cell.value * (s(cell.item, i) - s(cell.item, j));
        bpr += log1p_exp_neg(x);
      }
      loss += cfg.alpha * bpr / double(monitor.size());
    }
    if (use_features) {
      Eigen::MatrixXd residual = features->standardized.transpose();
      residual.noalias() -= features->standardized.transpose() * s;
      loss += (1.0 - cfg.alpha) * features->scale * residual.squaredNorm();
    }
    model.epoch_loss.push_back(loss);
  }
  return model;
}

}  // namespace

SimilarityModel train_collective_slim(const InteractionMatrix& ratings,
                                      const FeatureMatrix& features,
                                      const TrainConfig& config) {
  const FeatureTerm term = make_feature_term(features, ratings.n_items());
  return train(ratings, &term, config);
}

SimilarityModel train_bpr_slim(const InteractionMatrix& ratings, const TrainConfig& config) {
  return train(ratings, nullptr, config);
}

std::vector<double> score(const SimilarityModel& model, const InteractionMatrix& ratings,
                          int user) {
  if (user < 0 || user >= ratings.n_users()) {
    fail(ErrorKind::MissingUser, "unknown user index " + std::to_string(user));
  }
  if (ratings.n_items() != model.n_items()) {
    fail(ErrorKind::Alignment, "model and rating matrix disagree on the item count");
  }
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(model.n_items());
  for (const auto& cell : ratings.row(user)) {
    acc += cell.value * model.s.row(cell.item).transpose();
  }
  return {acc.data(), acc.data() + acc.size()};
}

std::vector<int> recommend(const SimilarityModel& model, const InteractionMatrix& ratings,
                           int user, int n) {
  if (n < 1) fail(ErrorKind::Parameter, "cutoff must be >= 1");
  const auto scores = score(model, ratings, user);
  std::vector<int> pool;
  const auto row = ratings.row(user);
  auto rated = row.begin();
  for (int t = 0; t < model.n_items(); ++t) {
    while (rated != row.end() && rated->item < t) ++rated;
    if (rated != row.end() && rated->item == t) continue;
    pool.push_back(t);
  }
  const auto take = std::min<std::size_t>(pool.size(), static_cast<std::size_t>(n));
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take), pool.end(),
                    [&](int a, int b) {
                      return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
                    });
  pool.resize(take);
  return pool;
}

namespace {
constexpr std::string_view kSlimMagic = "MISESLIM";
}

std::vector<std::uint8_t> write_checkpoint(const SimilarityModel& model) {
  ByteWriter out;
  out.put_raw(kSlimMagic);
  const auto& c = model.config;
  out.put(static_cast<std::uint64_t>(model.n_items()));
  out.put(static_cast<std::uint64_t>(model.feature_dim));
  out.put(c.alpha);
  out.put(c.gamma);
  out.put(c.learning_rate);
  out.put(static_cast<std::int32_t>(c.epochs));
  out.put(c.seed);
  out.put(c.relevance_threshold);
  out.put(static_cast<std::uint64_t>(c.samples_per_epoch));
  out.put(static_cast<std::int32_t>(c.feature_steps));
  for (Eigen::Index j = 0; j < model.s.cols(); ++j) {
    std::uint64_t nnz = 0;
    for (Eigen::Index i = 0; i < model.s.rows(); ++i) nnz += model.s(i, j) != 0.0;
    out.put(nnz);
    for (Eigen::Index i = 0; i < model.s.rows(); ++i) {
      if (model.s(i, j) == 0.0) continue;
      out.put(static_cast<std::uint32_t>(i));
      out.put(model.s(i, j));
    }
  }
  return std::move(out.bytes());
}

SimilarityModel parse_checkpoint(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  in.expect(kSlimMagic, "model checkpoint");
  SimilarityModel model;
  const auto n = in.get<std::uint64_t>("item count");
  if (n > (1u << 20)) fail(ErrorKind::Format, "implausible item count in checkpoint");
  model.feature_dim = static_cast<int>(in.get<std::uint64_t>("feature dim"));
  auto& c = model.config;
  c.alpha = in.get<double>("alpha");
  c.gamma = in.get<double>("gamma");
  c.learning_rate = in.get<double>("learning rate");
  c.epochs = in.get<std::int32_t>("epochs");
  c.seed = in.get<std::uint64_t>("seed");
  c.relevance_threshold = in.get<double>("threshold");
  c.samples_per_epoch = in.get<std::uint64_t>("samples");
  c.feature_steps = in.get<std::int32_t>("feature steps");
  const auto items = static_cast<Eigen::Index>(n);
  model.s = Eigen::MatrixXd::Zero(items, items);
  for (Eigen::Index j = 0; j < items; ++j) {
    const auto nnz = in.get<std::uint64_t>("column size");
    if (nnz > n) fail(ErrorKind::Format, "column " + std::to_string(j) + " overflows");
    for (std::uint64_t k = 0; k < nnz; ++k) {
      const auto i = in.get<std::uint32_t>("row index");
      const auto v = in.get<double>("value");
      if (i >= n || static_cast<Eigen::Index>(i) == j) {
        fail(ErrorKind::Format, "bad entry in checkpoint column " + std::to_string(j));
      }
      model.s(i, j) = v;
    }
  }
  return model;
}

}  // namespace mise
