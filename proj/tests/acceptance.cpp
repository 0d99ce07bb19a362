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


// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mise/aggregate.hpp"
#include "mise/error.hpp"
#include "mise/evalproto.hpp"
#include "mise/fusion.hpp"
#include "mise/media_io.hpp"
#include "mise/minidata.hpp"
#include "mise/mpeg7.hpp"
#include "mise/pipeline.hpp"
#include "mise/recsys.hpp"
#include "mise/shotseg.hpp"

using namespace mise;
using Eigen::MatrixXd;
using Eigen::VectorXd;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

FrameBuffer random_frame(std::mt19937_64& rng, int w, int h) {
  std::uniform_int_distribution<int> d(0, 255);
  FrameBuffer f(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      f.set(x, y, {std::uint8_t(d(rng)), std::uint8_t(d(rng)), std::uint8_t(d(rng))});
    }
  }
  return f;
}

double mass(const FeatureVector& v) {
  return std::accumulate(v.values().begin(), v.values().end(), 0.0);
}

// 1 -------------------------------------------------------------------------

void descriptor_dimensions() {
  Stopwatch clock;
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> side(32, 160);
  bool ok = true;
  for (int t = 0; t < 50; ++t) {
    const auto f = random_frame(rng, side(rng), side(rng));
    ok &= scd(f).size() == 256 && csd(f).size() == 256 && cld(f).size() == 120 &&
          ehd(f).size() == 80 && htd(f).size() == 62 && mpeg7_all(f).size() == 774;
  }
  const double s = clock.seconds();
  report(1, ok && s < 30.0, "descriptor dimensionality",
         fmt("50 frames, lengths %s, %.2f s (limit 30 s)", ok ? "256/256/120/80/62/774" : "wrong", s));
}

// 2 -------------------------------------------------------------------------

void shot_segmentation() {
  Stopwatch clock;
  std::mt19937_64 rng(202);
  int exact = 0;
  for (int t = 0; t < 20; ++t) {
    const auto video = synthetic_video(random_recipe(rng, 48, 36), rng);
    const auto decoded = parse_y4m(write_y4m(video.stream));
    const auto shots = detect_shots(decoded, 0.75);
    exact += shots.boundaries == video.boundaries;
  }
  const double s = clock.seconds();
  report(2, exact == 20 && s < 10.0, "shot segmentation oracle",
         fmt("%d/20 Y4M streams exact at threshold 0.75, %.2f s (limit 10 s)", exact, s));
}

// 3 -------------------------------------------------------------------------

void descriptor_invariants() {
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<int> side(32, 120), channel(0, 255);
  double ehd_max = 0, htd_max = 0, cld_ac_max = 0, mass_err = 0;
  for (int t = 0; t < 30; ++t) {
    const Rgb c{std::uint8_t(channel(rng)), std::uint8_t(channel(rng)), std::uint8_t(channel(rng))};
    const FrameBuffer f(side(rng), side(rng), c);
    const auto e = ehd(f);
    for (double v : e.values()) ehd_max = std::max(ehd_max, std::abs(v));
    const auto h = htd(f);
    for (std::size_t k = 2; k < 32; ++k) htd_max = std::max(htd_max, std::abs(h[k]));
    const auto l = cld(f);
    for (std::size_t ch = 0; ch < 3; ++ch) {
      for (std::size_t i = 1; i < 40; ++i) cld_ac_max = std::max(cld_ac_max, std::abs(l[ch * 40 + i]));
    }
    mass_err = std::max({mass_err, std::abs(mass(scd(f)) - 1), std::abs(mass(csd(f)) - 1)});
  }
  // SCD is a normalized histogram on any frame.
  for (int t = 0; t < 30; ++t) {
    mass_err = std::max(mass_err, std::abs(mass(scd(random_frame(rng, side(rng), side(rng)))) - 1));
  }
  const bool ok = ehd_max < 1e-9 && htd_max < 1e-9 && cld_ac_max < 1e-9 && mass_err < 1e-9;
  report(3, ok, "descriptor invariants",
         fmt("max |EHD| %.1e, max |HTD e_k| %.1e, max |CLD AC| %.1e, max mass error %.1e",
             ehd_max, htd_max, cld_ac_max, mass_err));
}

// 4 -------------------------------------------------------------------------

void aggregation_algebra() {
  std::mt19937_64 rng(404);
  std::uniform_int_distribution<int> count(1, 9), length(1, 12), coarse(-3, 3);
  std::normal_distribution<double> g(0.0, 1.0);
  std::bernoulli_distribution tie(0.3);
  constexpr AggregationKind kinds[] = {AggregationKind::Intersection, AggregationKind::Average,
                                       AggregationKind::Median, AggregationKind::Union};
  int order_violations = 0, permutation_mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = count(rng), d = length(rng);
    std::vector<FeatureVector> set;
    for (int i = 0; i < n; ++i) {
      std::vector<double> v(static_cast<std::size_t>(d));
      for (auto& x : v) x = tie(rng) ? double(coarse(rng)) : g(rng);
      set.emplace_back(FeatureKind::TagLsa, std::move(v));
    }
    const auto lo = aggregate(set, AggregationKind::Intersection);
    const auto avg = aggregate(set, AggregationKind::Average);
    const auto med = aggregate(set, AggregationKind::Median);
    const auto hi = aggregate(set, AggregationKind::Union);
    for (std::size_t k = 0; k < std::size_t(d); ++k) {
      order_violations += !(lo[k] <= med[k] && med[k] <= hi[k] && lo[k] <= avg[k] && avg[k] <= hi[k]);
    }
    auto shuffled = set;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (auto kind : kinds) permutation_mismatches += aggregate(set, kind) != aggregate(shuffled, kind);
  }
  report(4, order_violations == 0 && permutation_mismatches == 0, "aggregation algebra",
         fmt("1000 sets, %d ordering violations, %d permutation mismatches", order_violations,
             permutation_mismatches));
}

// 5 -------------------------------------------------------------------------

// Unit vector from hyperspherical angles.
VectorXd on_sphere(const std::vector<double>& angles) {
  VectorXd c(static_cast<Eigen::Index>(angles.size()) + 1);
  double carry = 1.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    c(Eigen::Index(i)) = carry * std::cos(angles[i]);
    carry *= std::sin(angles[i]);
  }
  c(c.size() - 1) = carry;
  return c;
}

// Maximizes f over the unit sphere in R^m: exhaustive angular grid, then a
// shrinking pattern search around the best grid point.
VectorXd grid_maximize(int m, const std::function<double(const VectorXd&)>& f) {
  if (m == 1) return VectorXd::Ones(1);
  constexpr int kSteps = 36;
  const int dims = m - 1;
  const auto dim_count = static_cast<std::size_t>(dims);
  std::vector<double> best(dim_count, 0.0), cur(dim_count);
  double best_value = -1.0;
  std::vector<int> idx(dim_count, 0);
  while (true) {
    for (int i = 0; i < dims; ++i) cur[std::size_t(i)] = M_PI * (idx[std::size_t(i)] + 0.5) / kSteps;
    const double v = f(on_sphere(cur));
    if (v > best_value) {
      best_value = v;
      best = cur;
    }
    int i = 0;
    while (i < dims && ++idx[std::size_t(i)] == kSteps) idx[std::size_t(i++)] = 0;
    if (i == dims) break;
  }
  for (double h = M_PI / kSteps; h > 1e-11; h *= 0.5) {
    for (bool moved = true; moved;) {
      moved = false;
      for (int i = 0; i < dims; ++i) {
        for (double sign : {-1.0, 1.0}) {
          auto trial = best;
          trial[std::size_t(i)] += sign * h;
          const double v = f(on_sphere(trial));
          if (v > best_value) {
            best_value = v;
            best = trial;
            moved = true;
          }
        }
      }
    }
  }
  return on_sphere(best);
}

// Canonical correlations by brute force: for a direction a of X the best
// partner correlation is sqrt(a'Cxy Cyy^-1 Cyx a / a'Cxx a); maximize it over
// a grid on the sphere, restricted to directions uncorrelated with the ones
// already found.
std::vector<double> cca_oracle(const MatrixXd& x, const MatrixXd& y, int k) {
  const MatrixXd xc = x.rowwise() - x.colwise().mean();
  const MatrixXd yc = y.rowwise() - y.colwise().mean();
  const MatrixXd cxx = xc.transpose() * xc;
  const MatrixXd cxy = xc.transpose() * yc;
  const MatrixXd cyy = yc.transpose() * yc;
  const MatrixXd m = cxy * cyy.ldlt().solve(cxy.transpose());
  std::vector<VectorXd> found;
  std::vector<double> out;
  for (int r = 0; r < k; ++r) {
    // Basis of the Cxx-orthogonal complement of the found directions.
    MatrixXd basis = MatrixXd::Identity(x.cols(), x.cols());
    if (!found.empty()) {
      MatrixXd constraints(Eigen::Index(found.size()), x.cols());
      for (std::size_t i = 0; i < found.size(); ++i) {
        constraints.row(Eigen::Index(i)) = (cxx * found[i]).transpose();
      }
      basis = constraints.fullPivLu().kernel();
    }
    const auto rho2 = [&](const VectorXd& c) {
      const VectorXd a = basis * c;
      return a.dot(m * a) / a.dot(cxx * a);
    };
    const VectorXd c = grid_maximize(int(basis.cols()), rho2);
    found.push_back(basis * c);
    out.push_back(std::sqrt(std::max(0.0, rho2(c))));
  }
  return out;
}

void cca_against_oracle() {
  std::mt19937_64 rng(505);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0, identity_err = 0.0;
  for (int t = 0; t < 10; ++t) {
    MatrixXd x(30, 4), y(30, 3), mix(4, 3);
    for (auto* mat : {&x, &y, &mix}) {
      for (Eigen::Index i = 0; i < mat->size(); ++i) mat->data()[i] = g(rng);
    }
    y = x * mix * 0.5 + y;
    const auto model = fit_cca(x, y, 3, 0.0);
    const auto want = cca_oracle(x, y, 3);
    for (int r = 0; r < 3; ++r) worst = std::max(worst, std::abs(model.correlations(r) - want[std::size_t(r)]));
    const auto self = fit_cca(x, x, 4, 0.0);
    for (int r = 0; r < 4; ++r) identity_err = std::max(identity_err, std::abs(self.correlations(r) - 1.0));
  }
  report(5, worst <= 1e-3 && identity_err <= 1e-8, "CCA oracle",
         fmt("10 pairs 30x4/30x3, max |rho - oracle| %.1e (limit 1e-3), identity error %.1e (limit 1e-8)",
             worst, identity_err));
}

// 6 -------------------------------------------------------------------------

struct HeldOut {
  InteractionMatrix full;
  InteractionMatrix train;
  std::vector<std::pair<int, int>> positives;  // (user, held-out item)
};

// Two disjoint communities: users 0..24 rate items 0..9, users 25..49 rate
// items 10..19. One positive per user is held out.
HeldOut two_block_dataset(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> stars(7, 10);  // half stars
  std::vector<Rating> all, train;
  HeldOut out;
  for (int u = 0; u < 50; ++u) {
    const int base = u < 25 ? 0 : 10;
    std::vector<int> items(10);
    std::iota(items.begin(), items.end(), base);
    std::shuffle(items.begin(), items.end(), rng);
    items.resize(9);
    bool held = false;
    for (int i : items) {
      const Rating r{u, i, stars(rng) / 2.0, 0};
      all.push_back(r);
      if (!held && r.value >= 4.0) {
        out.positives.emplace_back(u, i);
        held = true;
      } else {
        train.push_back(r);
      }
    }
  }
  out.full = InteractionMatrix(50, 20, all);
  out.train = InteractionMatrix(50, 20, train);
  return out;
}

FeatureMatrix two_block_features(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.1);
  FeatureMatrix f;
  f.family = FeatureKind::Genre;
  f.values = MatrixXd(20, 4);
  for (int i = 0; i < 20; ++i) {
    const bool first = i < 10;
    f.values.row(i) << (first ? 1.0 : 0.0) + g(rng), (first ? 0.0 : 1.0) + g(rng), g(rng), g(rng);
  }
  return f;
}

// Pairwise AUC of each held-out positive against the user's unrated items.
// Ties are broken by an independent random key per item; the result is the
// mean over many tie-break draws.
double pairwise_auc(const SimilarityModel& model, const HeldOut& data, std::uint64_t seed) {
  constexpr int kDraws = 200;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double sum = 0.0;
  for (int draw = 0; draw < kDraws; ++draw) {
    for (const auto& [user, item] : data.positives) {
      const auto sc = score(model, data.train, user);
      std::vector<double> key(sc.size());
      for (auto& k : key) k = u01(rng);
      const auto above = [&](int a, int b) {
        const auto ua = std::size_t(a), ub = std::size_t(b);
        return sc[ua] != sc[ub] ? sc[ua] > sc[ub] : key[ua] > key[ub];
      };
      int wins = 0, pairs = 0;
      for (int j = 0; j < data.full.n_items(); ++j) {
        if (data.full.contains(user, j)) continue;
        ++pairs;
        wins += above(item, j);
      }
      sum += double(wins) / pairs;
    }
  }
  return sum / double(kDraws * data.positives.size());
}

void learning_signal() {
  const auto data = two_block_dataset(606);
  const auto features = two_block_features(607);
  TrainConfig cfg;
  cfg.seed = 608;
  Stopwatch clock;
  const auto model = train_collective_slim(data.train, features, cfg);
  const double s = clock.seconds();
  SimilarityModel untrained;
  untrained.s = MatrixXd::Zero(20, 20);
  const double trained_auc = pairwise_auc(model, data, 609);
  const double baseline_auc = pairwise_auc(untrained, data, 609);
  report(6, trained_auc >= 0.90 && baseline_auc <= 0.55 && s < 60.0, "recommender learning signal",
         fmt("AUC trained %.4f (>= 0.90), untrained %.4f (<= 0.55), training %.2f s (limit 60 s)",
             trained_auc, baseline_auc, s));
}

// 7 -------------------------------------------------------------------------

// Four item blocks; features are block indicators plus noise, so they
// determine membership. Users rate only warm items of their own block and
// like every cold item of it.
void side_information() {
  constexpr int kUsers = 100, kItems = 40, kBlocks = 4;
  const auto block = [](int i) { return i % kBlocks; };
  std::mt19937_64 rng(707);
  std::vector<int> order(kItems);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  // 30% cold: 3 of the 10 items of every block.
  std::set<int> cold;
  int per_block[kBlocks] = {};
  for (int i : order) {
    if (per_block[block(i)] < 3) {
      cold.insert(i);
      ++per_block[block(i)];
    }
  }
  std::uniform_int_distribution<int> liked(8, 10);
  std::vector<Rating> train;
  std::vector<std::vector<int>> cold_relevant(kUsers);
  for (int u = 0; u < kUsers; ++u) {
    std::vector<int> warm;
    for (int i = 0; i < kItems; ++i) {
      if (block(i) != u % kBlocks) continue;
      (cold.contains(i) ? cold_relevant[std::size_t(u)] : warm).push_back(i);
    }
    std::shuffle(warm.begin(), warm.end(), rng);
    for (int k = 0; k < 5; ++k) train.push_back({u, warm[std::size_t(k)], liked(rng) / 2.0, 0});
  }
  const InteractionMatrix ratings(kUsers, kItems, train);
  std::normal_distribution<double> g(0.0, 0.1);
  FeatureMatrix features;
  features.family = FeatureKind::Genre;
  features.values = MatrixXd(kItems, kBlocks + 2);
  for (int i = 0; i < kItems; ++i) {
    for (int c = 0; c < kBlocks + 2; ++c) features.values(i, c) = (c == block(i)) + g(rng);
  }

  const auto cold_recall = [&](const SimilarityModel& model) {
    double sum = 0.0;
    for (int u = 0; u < kUsers; ++u) {
      const auto top = recommend(model, ratings, u, 10);
      const auto& rel = cold_relevant[std::size_t(u)];
      int hits = 0;
      for (int i : top) hits += std::find(rel.begin(), rel.end(), i) != rel.end();
      sum += double(hits) / double(rel.size());
    }
    return sum / kUsers;
  };
  TrainConfig cfg;
  cfg.seed = 709;
  cfg.alpha = 0.5;
  const double collective = cold_recall(train_collective_slim(ratings, features, cfg));
  cfg.alpha = 1.0;
  const double pure = cold_recall(train_collective_slim(ratings, features, cfg));
  report(7, collective - pure >= 0.10, "side-information effect",
         fmt("cold-item recall@10 alpha=0.5 %.4f vs alpha=1 %.4f, gain %.4f (>= 0.10)", collective,
             pure, collective - pure));
}

// 8 -------------------------------------------------------------------------

using MetricKey = std::tuple<std::string, std::string, int>;

// Direct enumeration of both metric families from their definitions.
std::map<MetricKey, double> metric_oracle(const MatrixXd& s, const InteractionMatrix& full,
                                          const Split& split, const std::vector<int>& cutoffs) {
  const int n = full.n_items();
  std::map<int, std::map<int, double>> rows;
  std::set<std::pair<int, int>> seen;
  for (const auto& r : split.train) {
    rows[r.user][r.item] = r.value;
    seen.emplace(r.user, r.item);
  }
  for (const auto& r : split.validation) seen.emplace(r.user, r.item);
  std::map<int, std::vector<int>> relevant;
  for (const auto& r : split.test) {
    if (r.value >= 4.0) relevant[r.user].push_back(r.item);
  }
  std::vector<int> ranks;
  std::map<int, std::vector<int>> lists;
  for (const auto& [u, items] : relevant) {
    if (rows[u].empty()) continue;
    std::vector<double> sc(std::size_t(n), 0.0);
    for (int t = 0; t < n; ++t) {
      for (const auto& [l, v] : rows[u]) sc[std::size_t(t)] += v * s(l, t);
    }
    for (int i : items) {
      // Pessimistic rank: one plus every candidate scoring at least as high.
      int rank = 1;
      for (int t = 0; t < n; ++t) {
        if (t != i && !full.contains(u, t) && sc[std::size_t(t)] >= sc[std::size_t(i)]) ++rank;
      }
      ranks.push_back(rank);
    }
    std::vector<int> pool;
    for (int t = 0; t < n; ++t) {
      if (!seen.contains({u, t})) pool.push_back(t);
    }
    std::stable_sort(pool.begin(), pool.end(),
                     [&](int a, int b) { return sc[std::size_t(a)] > sc[std::size_t(b)]; });
    lists[u] = pool;
  }
  std::map<MetricKey, double> out;
  for (int cut : cutoffs) {
    double hits = 0, ap = 0;
    for (int r : ranks) {
      if (r <= cut) {
        hits += 1;
        ap += 1.0 / r;
      }
    }
    out[{"protocol", "recall", cut}] = hits / double(ranks.size());
    out[{"protocol", "precision", cut}] = hits / double(ranks.size()) / cut;
    out[{"protocol", "map", cut}] = ap / double(ranks.size());
    double p = 0, rc = 0, m = 0;
    for (const auto& [u, list] : lists) {
      const auto& rel = relevant[u];
      int h = 0;
      double prec_sum = 0;
      for (int k = 0; k < cut && k < int(list.size()); ++k) {
        if (std::find(rel.begin(), rel.end(), list[std::size_t(k)]) != rel.end()) {
          ++h;
          prec_sum += double(h) / (k + 1);
        }
      }
      p += double(h) / cut;
      rc += double(h) / double(rel.size());
      m += prec_sum / double(std::min<std::size_t>(rel.size(), std::size_t(cut)));
    }
    out[{"standard", "recall", cut}] = rc / double(lists.size());
    out[{"standard", "precision", cut}] = p / double(lists.size());
    out[{"standard", "map", cut}] = m / double(lists.size());
  }
  return out;
}

bool identity_and_monotone(const FoldMetrics& m, const std::vector<int>& cutoffs) {
  bool ok = true;
  for (int n : cutoffs) {
    ok &= std::abs(m.get("protocol", "precision", n) * n - m.get("protocol", "recall", n)) <= 1e-12;
  }
  for (std::size_t i = 1; i < cutoffs.size(); ++i) {
    for (const char* family : {"protocol", "standard"}) {
      ok &= m.get(family, "recall", cutoffs[i - 1]) <= m.get(family, "recall", cutoffs[i]);
    }
  }
  return ok;
}

void metric_oracle_check() {
  const std::vector<int> cutoffs{1, 10, 20};
  std::mt19937_64 rng(808);
  std::uniform_int_distribution<int> stars(1, 10), coarse(-2, 2);
  std::normal_distribution<double> g(0.0, 1.0);
  int mismatches = 0, compared = 0, identity_failures = 0, runs = 0, skipped = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    constexpr int kUsers = 5, kItems = 30;
    std::vector<Rating> r;
    for (int u = 0; u < kUsers; ++u) {
      std::vector<int> items(kItems);
      std::iota(items.begin(), items.end(), 0);
      std::shuffle(items.begin(), items.end(), rng);
      for (int k = 0; k < 12; ++k) r.push_back({u, items[std::size_t(k)], stars(rng) / 2.0, k});
    }
    const InteractionMatrix full(kUsers, kItems, r);
    // Half the trials use coarse similarities to force score ties.
    MatrixXd s(kItems, kItems);
    for (Eigen::Index i = 0; i < s.size(); ++i) s.data()[i] = trial % 2 ? double(coarse(rng)) : g(rng);
    s.diagonal().setZero();
    SimilarityModel model;
    model.s = s;
    EvalOptions opts;
    opts.cutoffs = cutoffs;
    for (const auto& split : make_splits(full, 5, 800 + std::uint64_t(trial))) {
      FoldMetrics got;
      try {
        got = evaluate_split(model, full, split, opts);
      } catch (const Error& e) {
        // No relevant test item in this fold: nothing to compare.
        if (e.kind() != ErrorKind::EmptyInput) throw;
        ++skipped;
        continue;
      }
      ++runs;
      identity_failures += !identity_and_monotone(got, cutoffs);
      for (const auto& [key, value] : metric_oracle(s, full, split, cutoffs)) {
        const auto& [family, metric, cut] = key;
        const double d = std::abs(got.get(family, metric, cut) - value);
        worst = std::max(worst, d);
        mismatches += d > 1e-12;
        ++compared;
      }
    }
  }
  report(8, mismatches == 0 && identity_failures == 0, "metric oracle",
         fmt("%d/%d values match enumeration on 5-user toys (max diff %.1e), identity and "
             "monotonicity failures %d/%d folds (%d folds without relevant tests)",
             compared - mismatches, compared, worst, identity_failures, runs, skipped));
}

// 9 -------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void end_to_end_determinism() {
  const fs::path mini = MISE_MINI_DATA;
  const auto root = fs::temp_directory_path() / "mise_acceptance_e2e";
  fs::remove_all(root);
  Stopwatch clock;
  std::string reports[2];
  for (int run = 0; run < 2; ++run) {
    PipelineConfig cfg;
    cfg.videos = mini / "videos";
    cfg.ratings = mini / "ratings.csv";
    cfg.tags = mini / "tags.csv";
    cfg.movies = mini / "movies.csv";
    cfg.embeddings = mini / "embeddings.csv";
    cfg.cache = root / std::to_string(run);
    std::ostringstream sink;
    run_all(cfg, sink);
    reports[run] = slurp(cfg.cache / "evaluate" / std::string(to_string(cfg.features)) / "report.csv");
  }
  const double s = clock.seconds();
  fs::remove_all(root);
  const bool same = !reports[0].empty() && reports[0] == reports[1];
  report(9, same && s < 300.0, "end-to-end determinism",
         fmt("two mini-dataset runs %s, %.2f s (limit 300 s)",
             same ? "byte-identical" : "differ", s));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria = {
      descriptor_dimensions, shot_segmentation,  descriptor_invariants,
      aggregation_algebra,   cca_against_oracle, learning_signal,
      side_information,      metric_oracle_check, end_to_end_determinism};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      report(int(i) + 1, false, "criterion", std::string("threw: ") + e.what());
    }
  }
  std::printf("SKIP 10 corpus-scale ordering: optional, needs the full MovieLens corpus and trailers\n");
  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
