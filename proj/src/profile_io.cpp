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
#include <map>
#include <string>

#include "collperf/error.hpp"
#include "collperf/profile.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace collperf {
namespace {

using json = nlohmann::json;

struct PositionedSample {
  PLogPSample sample;
  std::string where;
};

// Positional checks run before NetworkProfile's own validation so the
// message can point at the offending record.
NetworkProfile build_profile(std::string name, double latency,
                             const std::string& latency_where,
                             const std::vector<PositionedSample>& rows) {
  if (!(std::isfinite(latency) && latency > 0.0)) {
    throw ValidationError(latency_where + ": latency must be positive, got " +
                          format_double(latency));
  }
  std::map<std::int64_t, const std::string*> seen;
  std::vector<PLogPSample> samples;
  samples.reserve(rows.size());
  for (const PositionedSample& row : rows) {
    const PLogPSample& s = row.sample;
    if (s.bytes < 1) {
      throw ValidationError(row.where + ": bytes must be >= 1, got " +
                            std::to_string(s.bytes));
    }
    const auto check = [&](double v, std::string_view field) {
      if (!(std::isfinite(v) && v > 0.0)) {
        throw ValidationError(row.where + ": " + std::string(field) +
                              " must be positive, got " + format_double(v));
      }
    };
    check(s.g, "g");
    check(s.os, "os");
    check(s.or_, "or");
    const auto [it, inserted] = seen.emplace(s.bytes, &row.where);
    if (!inserted) {
      throw ValidationError(row.where + ": duplicate sample size " +
                            std::to_string(s.bytes) + " (first seen at " +
                            *it->second + ")");
    }
    samples.push_back(s);
  }
  if (samples.empty()) throw ValidationError("profile has no samples");
  if (!seen.contains(1)) {
    throw ValidationError("profile must contain a 1-byte sample");
  }
  return NetworkProfile(std::move(name), latency, std::move(samples));
}

double json_number(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where, std::string("missing \"") + key + "\"");
  if (!it->is_number()) {
    throw ParseError(where + "." + key, "expected a number");
  }
  return it->get<double>();
}

NetworkProfile parse_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), "malformed JSON");
  }
  if (!doc.is_object()) throw ParseError("", "profile must be a JSON object");
  std::string name = "profile";
  if (const auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) throw ParseError("name", "expected a string");
    name = it->get<std::string>();
  }
  const double latency = json_number(doc, "latency_us", "profile");
  const auto samples = doc.find("samples");
  if (samples == doc.end()) throw ParseError("profile", "missing \"samples\"");
  if (!samples->is_array()) throw ParseError("samples", "expected an array");

  std::vector<PositionedSample> rows;
  for (std::size_t i = 0; i < samples->size(); ++i) {
    const json& rec = (*samples)[i];
    const std::string where = "samples[" + std::to_string(i) + "]";
    if (!rec.is_object()) throw ParseError(where, "expected an object");
    const auto bytes = rec.find("bytes");
    if (bytes == rec.end()) throw ParseError(where, "missing \"bytes\"");
    if (!bytes->is_number_integer()) {
      throw ParseError(where + ".bytes", "expected an integer");
    }
    PositionedSample row;
    row.where = where;
    row.sample.bytes = bytes->get<std::int64_t>();
    row.sample.g = json_number(rec, "g_us", where);
    row.sample.os = json_number(rec, "os_us", where);
    row.sample.or_ = json_number(rec, "or_us", where);
    rows.push_back(std::move(row));
  }
  return build_profile(std::move(name), latency, "latency_us", rows);
}

NetworkProfile parse_columns(std::string_view text, std::string_view fallback) {
  std::optional<double> latency;
  std::string latency_where;
  std::string name(fallback);
  std::vector<PositionedSample> rows;
  const auto lines = detail::split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t lineno = n + 1;
    const std::string_view line = detail::trim(lines[n]);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string_view body = detail::trim(line.substr(1));
      const auto tokens = detail::split_whitespace(body);
      if (tokens.empty()) continue;
      if (tokens[0] == "L") {
        if (tokens.size() != 2) {
          throw ParseError("line " + std::to_string(lineno),
                           "latency header must be '# L <latency_us>'");
        }
        const auto v = detail::to_double(tokens[1]);
        if (!v) throw ParseError(detail::line_field(lineno, 2), "latency is not a number");
        latency = *v;
        latency_where = "line " + std::to_string(lineno);
      } else if (tokens[0] == "name") {
        name = std::string(detail::trim(body.substr(4)));
      }
      continue;
    }
    const auto fields = detail::split_whitespace(line);
    if (fields.size() != 4) {
      throw ParseError("line " + std::to_string(lineno),
                       "expected 4 fields 'bytes g_us os_us or_us', got " +
                           std::to_string(fields.size()));
    }
    PositionedSample row;
    row.where = "line " + std::to_string(lineno);
    const auto bytes = detail::to_int(fields[0]);
    if (!bytes) throw ParseError(detail::line_field(lineno, 1), "bytes is not an integer");
    row.sample.bytes = *bytes;
    double* targets[3] = {&row.sample.g, &row.sample.os, &row.sample.or_};
    for (std::size_t f = 1; f < 4; ++f) {
      const auto v = detail::to_double(fields[f]);
      if (!v) throw ParseError(detail::line_field(lineno, f + 1), "value is not a number");
      *targets[f - 1] = *v;
    }
    rows.push_back(std::move(row));
  }
  if (!latency) throw ParseError("", "missing latency ('# L <latency_us>' header)");
  return build_profile(std::move(name), *latency, latency_where, rows);
}

}  // namespace

ProfileFormat profile_format_for(const std::filesystem::path& path) {
  return path.extension() == ".json" ? ProfileFormat::json
                                     : ProfileFormat::columns;
}

NetworkProfile parse_profile(std::string_view text, ProfileFormat format,
                             std::string_view fallback_name) {
  return format == ProfileFormat::json ? parse_json(text)
                                       : parse_columns(text, fallback_name);
}

std::string format_profile(const NetworkProfile& profile, ProfileFormat format) {
  if (format == ProfileFormat::json) {
    json doc;
    doc["name"] = profile.name();
    doc["latency_us"] = profile.latency();
    json samples = json::array();
    for (const PLogPSample& s : profile.samples()) {
      samples.push_back(
          {{"bytes", s.bytes}, {"g_us", s.g}, {"os_us", s.os}, {"or_us", s.or_}});
    }
    doc["samples"] = std::move(samples);
    return doc.dump(2) + "\n";
  }
  std::string out;
  out += "# name " + profile.name() + "\n";
  out += "# L " + format_double(profile.latency()) + "\n";
  out += "# bytes g_us os_us or_us\n";
  for (const PLogPSample& s : profile.samples()) {
    out += std::to_string(s.bytes) + " " + format_double(s.g) + " " +
           format_double(s.os) + " " + format_double(s.or_) + "\n";
  }
  return out;
}

NetworkProfile load_profile(const std::filesystem::path& path,
                            ProfileFormat format) {
  const std::string text = detail::read_file(path);
  try {
    return parse_profile(text, format, path.stem().string());
  } catch (const ParseError& e) {
    throw ParseError(
        path.string() + (e.where().empty() ? "" : ", " + e.where()), e.detail());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

NetworkProfile load_profile(const std::filesystem::path& path) {
  return load_profile(path, profile_format_for(path));
}

void save_profile(const NetworkProfile& profile,
                  const std::filesystem::path& path, ProfileFormat format) {
  detail::write_file(path, format_profile(profile, format));
}

}  // namespace collperf
