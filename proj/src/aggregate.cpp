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

#include "mise/aggregate.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "mise/error.hpp"

namespace mise {

std::string_view to_string(AggregationKind kind) noexcept {
  switch (kind) {
    case AggregationKind::Intersection: return "intersection";
    case AggregationKind::Average: return "average";
    case AggregationKind::Median: return "median";
    case AggregationKind::Union: return "union";
  }
  return "unknown";
}

AggregationKind aggregation_from_string(std::string_view name) {
  for (auto kind : {AggregationKind::Intersection, AggregationKind::Average,
                    AggregationKind::Median, AggregationKind::Union}) {
    if (to_string(kind) == name) return kind;
  }
  fail(ErrorKind::Parameter, "unknown aggregation '" + std::string(name) + "'");
}

FeatureVector aggregate(std::span<const FeatureVector> vectors,
                        AggregationKind kind) {
  if (vectors.empty()) fail(ErrorKind::EmptyInput, "nothing to aggregate");
  const FeatureKind fk = vectors.front().kind();
  const std::size_t len = vectors.front().size();
  for (const auto& v : vectors) {
    if (v.kind() != fk) {
      fail(ErrorKind::KindMismatch, "cannot aggregate " +
                                        std::string(to_string(fk)) + " with " +
                                        std::string(to_string(v.kind())));
    }
    if (v.size() != len) fail(ErrorKind::Dimension, "aggregated vectors differ in length");
  }

  std::vector<double> out(len);
  std::vector<double> column(vectors.size());
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t k = 0; k < vectors.size(); ++k) column[k] = vectors[k][i];
    switch (kind) {
      case AggregationKind::Intersection:
        out[i] = *std::min_element(column.begin(), column.end());
        break;
      case AggregationKind::Union:
        out[i] = *std::max_element(column.begin(), column.end());
        break;
      case AggregationKind::Average: {
        // Sorted summation keeps the result independent of input order.
        std::sort(column.begin(), column.end());
        double s = 0.0;
        for (double v : column) s += v;
        out[i] = s / static_cast<double>(column.size());
        break;
      }
      case AggregationKind::Median: {
        std::sort(column.begin(), column.end());
        const std::size_t m = column.size() / 2;
        out[i] = column.size() % 2 ? column[m] : 0.5 * (column[m - 1] + column[m]);
        break;
      }
    }
  }
  return FeatureVector(fk, std::move(out));
}

}  // namespace mise
