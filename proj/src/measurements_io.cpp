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

#include <cmath>
#include <string>

#include "collperf/error.hpp"
#include "collperf/tuning.hpp"
#include "text_util.hpp"

namespace collperf {
namespace {

constexpr std::string_view kHeader = "procs,bytes,time_us";

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(detail::trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

MeasurementSet parse_measurements(std::string_view text, std::string label) {
  MeasurementSet set;
  set.network_label = std::move(label);
  bool header_seen = false;
  const auto lines = detail::split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t lineno = n + 1;
    const std::string_view line = detail::trim(lines[n]);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kHeader) {
        throw ParseError("line " + std::to_string(lineno),
                         "expected header '" + std::string(kHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    const auto fields = split_commas(line);
    if (fields.size() != 3) {
      throw ParseError("line " + std::to_string(lineno),
                       "expected 3 fields, got " + std::to_string(fields.size()));
    }
    MeasurementRecord rec;
    const auto procs = detail::to_int(fields[0]);
    if (!procs || *procs < 1) {
      throw ParseError(detail::line_field(lineno, 1), "procs must be an integer >= 1");
    }
    const auto bytes = detail::to_int(fields[1]);
    if (!bytes || *bytes < 1) {
      throw ParseError(detail::line_field(lineno, 2), "bytes must be an integer >= 1");
    }
    const auto time = detail::to_double(fields[2]);
    if (!time || !(*time > 0.0) || !std::isfinite(*time)) {
      throw ParseError(detail::line_field(lineno, 3), "time_us must be a positive number");
    }
    rec.procs = *procs;
    rec.bytes = *bytes;
    rec.time_us = *time;
    set.records.push_back(rec);
  }
  if (!header_seen) throw ParseError("", "empty measurement file");
  return set;
}

std::string format_measurements(const MeasurementSet& set) {
  std::string out(kHeader);
  out += '\n';
  for (const MeasurementRecord& r : set.records) {
    out += std::to_string(r.procs) + "," + std::to_string(r.bytes) + "," +
           format_double(r.time_us) + "\n";
  }
  return out;
}

MeasurementSet load_measurements(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  try {
    return parse_measurements(text, path.stem().string());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + (e.where().empty() ? "" : ", " + e.where()),
                     e.detail());
  }
}

void save_measurements(const MeasurementSet& set, const std::filesystem::path& path) {
  detail::write_file(path, format_measurements(set));
}

}  // namespace collperf
