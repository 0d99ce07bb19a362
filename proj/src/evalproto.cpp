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

#include "mise/evalproto.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>

#include "mise/csv.hpp"
#include "mise/error.hpp"

namespace mise {

namespace {

constexpr const char* kFamilies[] = {"protocol", "standard"};
constexpr const char* kMetrics[] = {"recall", "precision", "map"};

bool by_user_item(const Rating& a, const Rating& b) {
  return std::tie(a.user, a.item) < std::tie(b.user, b.item);
}

void check_cutoffs(std::span<const int> cutoffs) {
  if (cutoffs.empty()) fail(ErrorKind::Parameter, "no cutoffs given");
  for (int n : cutoffs) {
    if (n < 1) fail(ErrorKind::Parameter, "cutoff " + std::to_string(n) + " is < 1");
  }
}

/// Items the user has not rated in `rated`, ascending.
std::vector<int> unrated_items(const InteractionMatrix& rated, int user) {
  std::vector<int> out;
  const auto row = rated.row(user);
  auto it = row.begin();
  for (int t = 0; t < rated.n_items(); ++t) {
    while (it != row.end() && it->item < t) ++it;
    if (it != row.end() && it->item == t) continue;
    out.push_back(t);
  }
  return out;
}

}  // namespace

std::vector<Split> make_splits(const InteractionMatrix& ratings, int folds,
                               std::uint64_t seed) {
  if (ratings.nnz() == 0) fail(ErrorKind::EmptyInput, "cannot split an empty rating matrix");
  if (folds < 1) fail(ErrorKind::Parameter, "folds must be >= 1");
  const auto& entries = ratings.entries();  // sorted by user

  std::vector<Split> out;
  for (int f = 0; f < folds; ++f) {
    Split split;
    split.fold = f;
    split.seed = seed;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(f)};
    std::mt19937_64 rng(seq);
    std::size_t begin = 0;
    while (begin < entries.size()) {
      std::size_t end = begin;
      while (end < entries.size() && entries[end].user == entries[begin].user) ++end;
      const std::size_t n = end - begin;
      std::vector<Rating> user(entries.begin() + static_cast<std::ptrdiff_t>(begin),
                               entries.begin() + static_cast<std::ptrdiff_t>(end));
      if (n < 3) {
        split.train.insert(split.train.end(), user.begin(), user.end());
      } else {
        std::shuffle(user.begin(), user.end(), rng);
        const auto held = std::max<std::size_t>(1, std::llround(0.1 * double(n)));
        split.test.insert(split.test.end(), user.begin(), user.begin() + held);
        split.validation.insert(split.validation.end(), user.begin() + held,
                                user.begin() + 2 * held);
        split.train.insert(split.train.end(), user.begin() + 2 * held, user.end());
      }
      begin = end;
    }
    std::sort(split.train.begin(), split.train.end(), by_user_item);
    std::sort(split.validation.begin(), split.validation.end(), by_user_item);
    std::sort(split.test.begin(), split.test.end(), by_user_item);
    out.push_back(std::move(split));
  }
  return out;
}

int pessimistic_rank(std::span<const double> scores, int test_item,
                     std::span<const int> candidates) {
  if (test_item < 0 || static_cast<std::size_t>(test_item) >= scores.size()) {
    fail(ErrorKind::Dimension, "test item outside the score vector");
  }
  const double s = scores[static_cast<std::size_t>(test_item)];
  int rank = 1;
  for (int c : candidates) {
    if (c != test_item && scores[static_cast<std::size_t>(c)] >= s) ++rank;
  }
  return rank;
}

std::optional<RankResult> rank_one_plus_unrated(const SimilarityModel& model,
                                                const InteractionMatrix& train, int user,
                                                int test_item,
                                                const InteractionMatrix* exclude) {
  if (user < 0 || user >= train.n_users()) {
    fail(ErrorKind::MissingUser, "unknown user index " + std::to_string(user));
  }
  if (train.row(user).empty()) return std::nullopt;
  if (train.contains(user, test_item)) {
    fail(ErrorKind::Parameter, "test item is part of the user's training ratings");
  }
  const auto scores = score(model, train, user);
  auto candidates = unrated_items(exclude ? *exclude : train, user);
  if (!std::binary_search(candidates.begin(), candidates.end(), test_item)) {
    candidates.insert(std::lower_bound(candidates.begin(), candidates.end(), test_item),
                      test_item);
  }
  return RankResult{pessimistic_rank(scores, test_item, candidates),
                    static_cast<int>(candidates.size())};
}

double FoldMetrics::get(std::string_view family, std::string_view metric, int cutoff) const {
  for (const auto& v : values) {
    if (v.family == family && v.metric == metric && v.cutoff == cutoff) return v.value;
  }
  fail(ErrorKind::Parameter, "no metric " + std::string(family) + "/" + std::string(metric) +
                                 "@" + std::to_string(cutoff));
}

FoldMetrics compute_metrics(std::span<const RankedTest> ranks,
                            std::span<const UserTopList> lists,
                            std::span<const int> cutoffs) {
  check_cutoffs(cutoffs);
  if (ranks.empty()) fail(ErrorKind::EmptyInput, "no ranked test items");
  FoldMetrics out;
  out.tests = ranks.size();
  const double tests = static_cast<double>(ranks.size());
  for (int n : cutoffs) {
    double hits = 0.0, ap = 0.0;
    for (const auto& r : ranks) {
      if (r.rank < 1) fail(ErrorKind::Parameter, "ranks are 1-based");
      if (r.rank <= n) {
        hits += 1.0;
        ap += 1.0 / r.rank;
      }
    }
    const double recall = hits / tests;
    out.values.push_back({"protocol", "recall", n, recall});
    out.values.push_back({"protocol", "precision", n, recall / n});
    out.values.push_back({"protocol", "map", n, ap / tests});
  }

  for (int n : cutoffs) {
    double precision = 0.0, recall = 0.0, map = 0.0;
    std::size_t users = 0;
    for (const auto& list : lists) {
      if (list.relevant.empty()) continue;
      ++users;
      std::vector<int> rel = list.relevant;
      std::sort(rel.begin(), rel.end());
      const auto depth = std::min<std::size_t>(list.top.size(), static_cast<std::size_t>(n));
      double hits = 0.0, sum_prec = 0.0;
      for (std::size_t k = 0; k < depth; ++k) {
        if (std::binary_search(rel.begin(), rel.end(), list.top[k])) {
          hits += 1.0;
          sum_prec += hits / double(k + 1);
        }
      }
      precision += hits / n;
      recall += hits / double(rel.size());
      map += sum_prec / double(std::min<std::size_t>(rel.size(), static_cast<std::size_t>(n)));
    }
    const double u = users ? double(users) : 1.0;
    out.values.push_back({"standard", "recall", n, recall / u});
    out.values.push_back({"standard", "precision", n, precision / u});
    out.values.push_back({"standard", "map", n, map / u});
  }
  return out;
}

double EvalReport::mean(std::string_view family, std::string_view metric, int cutoff) const {
  if (folds.empty()) fail(ErrorKind::EmptyInput, "report has no folds");
  double sum = 0.0;
  for (const auto& f : folds) sum += f.get(family, metric, cutoff);
  return sum / double(folds.size());
}

double EvalReport::ci95(std::string_view family, std::string_view metric, int cutoff) const {
  if (folds.size() < 2) return 0.0;
  const double m = mean(family, metric, cutoff);
  double ss = 0.0;
  for (const auto& f : folds) {
    const double d = f.get(family, metric, cutoff) - m;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / double(folds.size() - 1));
  return 1.96 * sd / std::sqrt(double(folds.size()));
}

std::string EvalReport::to_csv() const {
  std::string out = "family,metric,cutoff,fold,value\n";
  for (const char* family : kFamilies) {
    for (const char* metric : kMetrics) {
      for (int n : cutoffs) {
        const std::string prefix = std::string(family) + "," + metric + "," +
                                   std::to_string(n) + ",";
        for (std::size_t f = 0; f < folds.size(); ++f) {
          out += prefix + std::to_string(f) + "," +
                 csv::format_double(folds[f].get(family, metric, n)) + "\n";
        }
        out += prefix + "mean," + csv::format_double(mean(family, metric, n)) + "\n";
        out += prefix + "ci95," + csv::format_double(ci95(family, metric, n)) + "\n";
      }
    }
  }
  return out;
}

std::string EvalReport::to_table() const {
  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-10s %-10s", "family", "metric");
  out += buf;
  for (int n : cutoffs) {
    std::snprintf(buf, sizeof(buf), " %20s", ("@" + std::to_string(n)).c_str());
    out += buf;
  }
  out += '\n';
  for (const char* family : kFamilies) {
    for (const char* metric : kMetrics) {
      std::snprintf(buf, sizeof(buf), "%-10s %-10s", family, metric);
      out += buf;
      for (int n : cutoffs) {
        std::snprintf(buf, sizeof(buf), " %11.4f +- %6.4f", mean(family, metric, n),
                      ci95(family, metric, n));
        out += buf;
      }
      out += '\n';
    }
  }
  std::size_t tests = 0, skipped = 0;
  for (const auto& f : folds) {
    tests += f.tests;
    skipped += f.skipped;
  }
  out += std::to_string(folds.size()) + " folds, " + std::to_string(tests) +
         " ranked test items, " + std::to_string(skipped) + " skipped (user without training ratings)\n";
  return out;
}

FoldMetrics evaluate_split(const SimilarityModel& model, const InteractionMatrix& full,
                           const Split& split, const EvalOptions& options) {
  check_cutoffs(options.cutoffs);
  const InteractionMatrix train(full.n_users(), full.n_items(), split.train);
  const InteractionMatrix held(full.n_users(), full.n_items(), split.validation);
  const int depth = *std::max_element(options.cutoffs.begin(), options.cutoffs.end());

  std::map<int, std::vector<int>> relevant;
  for (const auto& r : split.test) {
    if (r.value >= options.relevance_threshold) relevant[r.user].push_back(r.item);
  }

  std::vector<RankedTest> ranks;
  std::vector<UserTopList> lists;
  std::size_t skipped = 0;
  for (const auto& [user, items] : relevant) {
    if (train.row(user).empty()) {
      skipped += items.size();
      continue;
    }
    const auto scores = score(model, train, user);
    const auto unrated = unrated_items(full, user);
    for (int item : items) {
      std::vector<int> candidates = unrated;
      candidates.insert(std::lower_bound(candidates.begin(), candidates.end(), item), item);
      ranks.push_back({user, item, pessimistic_rank(scores, item, candidates),
                       static_cast<int>(candidates.size())});
    }

    std::vector<int> pool;
    for (int t = 0; t < full.n_items(); ++t) {
      if (!train.contains(user, t) && !held.contains(user, t)) pool.push_back(t);
    }
    const auto take = std::min<std::size_t>(pool.size(), static_cast<std::size_t>(depth));
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take),
                      pool.end(), [&](int a, int b) {
                        return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
                      });
    pool.resize(take);
    lists.push_back({user, std::move(pool), items});
  }
  if (ranks.empty()) {
    fail(ErrorKind::EmptyInput, "fold " + std::to_string(split.fold) +
                                    " has no relevant test items with training history");
  }
  auto out = compute_metrics(ranks, lists, options.cutoffs);
  out.skipped = skipped;
  return out;
}

EvalReport cross_validate(const InteractionMatrix& ratings, const Trainer& trainer,
                          const EvalOptions& options) {
  EvalReport report;
  report.cutoffs = options.cutoffs;
  for (const auto& split : make_splits(ratings, options.folds, options.seed)) {
    const InteractionMatrix train(ratings.n_users(), ratings.n_items(), split.train);
    const SimilarityModel model = trainer(train);
    report.folds.push_back(evaluate_split(model, ratings, split, options));
  }
  return report;
}

}  // namespace mise
