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

#include "output_record.hpp"

#include <algorithm>
#include <ostream>

#include "collperf/profile.hpp"
#include "json.hpp"

namespace collperf::cli {

OutputRecord& OutputRecord::set(const std::string& key, Value value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return *this;
    }
  }
  entries_.emplace_back(key, std::move(value));
  return *this;
}

std::optional<OutputRecord::Value> OutputRecord::get(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string render_value(const OutputRecord::Value& v) {
  struct Visitor {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  };
  return std::visit(Visitor{}, v);
}

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_csv(std::ostream& out, std::span<const OutputRecord> rows) {
  std::vector<std::string> keys;
  for (const OutputRecord& r : rows) {
    for (const auto& [k, v] : r.entries()) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    }
  }
  for (std::size_t i = 0; i < keys.size(); ++i) {
    out << (i ? "," : "") << csv_cell(keys[i]);
  }
  out << '\n';
  for (const OutputRecord& r : rows) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (i) out << ',';
      if (const auto v = r.get(keys[i])) out << csv_cell(render_value(*v));
    }
    out << '\n';
  }
}

void write_json(std::ostream& out, std::span<const OutputRecord> rows,
                bool as_array) {
  using nlohmann::ordered_json;
  const auto to_json = [](const OutputRecord& r) {
    ordered_json obj = ordered_json::object();
    for (const auto& [k, v] : r.entries()) {
      std::visit([&](const auto& x) { obj[k] = x; }, v);
    }
    return obj;
  };
  if (!as_array && rows.size() == 1) {
    out << to_json(rows.front()).dump(2) << '\n';
    return;
  }
  ordered_json arr = ordered_json::array();
  for (const OutputRecord& r : rows) arr.push_back(to_json(r));
  out << arr.dump(2) << '\n';
}

}  // namespace collperf::cli
