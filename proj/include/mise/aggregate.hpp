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

// Group-of-pictures aggregation of per-keyframe vectors into one movie-level
// vector.

#ifndef MISE_AGGREGATE_HPP
#define MISE_AGGREGATE_HPP

#include <span>
#include <string_view>

#include "mise/feature.hpp"

namespace mise {

enum class AggregationKind { Intersection, Average, Median, Union };

std::string_view to_string(AggregationKind kind) noexcept;
AggregationKind aggregation_from_string(std::string_view name);

/// Elementwise min / mean / median / max. The median of an even count is the
/// mean of the two middle values.
FeatureVector aggregate(std::span<const FeatureVector> vectors,
                        AggregationKind kind);

}  // namespace mise

#endif  // MISE_AGGREGATE_HPP
