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

#ifndef MISE_CSV_HPP
#define MISE_CSV_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mise::csv {

/// Splits one RFC 4180 record. Quoted fields may contain commas and doubled
/// quotes; embedded newlines are not supported.
std::vector<std::string> split(std::string_view line);

/// Lines of `text` with trailing '\r' removed; blank lines dropped.
std::vector<std::string_view> lines(std::string_view text);

/// Quotes a field when it contains a comma, quote or leading/trailing space.
std::string quote(std::string_view field);

double to_double(std::string_view field, std::size_t row);
std::int64_t to_int(std::string_view field, std::size_t row);

/// Shortest decimal form that round-trips the double exactly.
std::string format_double(double value);

}  // namespace mise::csv

#endif  // MISE_CSV_HPP
