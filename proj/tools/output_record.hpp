/* Copyright 2026 The collperf Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef COLLPERF_TOOLS_OUTPUT_RECORD_HPP_
#define COLLPERF_TOOLS_OUTPUT_RECORD_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace collperf::cli {

// Flat key -> value row, rendered as a CSV row or a JSON object. Keys keep
// insertion order. Doubles are written in shortest round-trip form.
class OutputRecord {
 public:
  using Value = std::variant<std::string, std::int64_t, double, bool>;

  OutputRecord& set(const std::string& key, Value value);
  std::optional<Value> get(const std::string& key) const;
  const std::vector<std::pair<std::string, Value>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, Value>> entries_;
};

std::string render_value(const OutputRecord::Value& v);

// Header is the union of keys in first-seen order; missing cells are empty.
void write_csv(std::ostream& out, std::span<const OutputRecord> rows);
// One record renders as an object, several as an array.
void write_json(std::ostream& out, std::span<const OutputRecord> rows,
                bool as_array);

}  // namespace collperf::cli

#endif  // COLLPERF_TOOLS_OUTPUT_RECORD_HPP_
