// Copyright 2026 The lulu Authors.
//
// Use of this source code is governed by the Apache License 2.0
// that can be found in the LICENSE file.

#ifndef LULU_PULSE_IO_HPP
#define LULU_PULSE_IO_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lulu/connectivity.hpp"
#include "lulu/dpt.hpp"
#include "lulu/grid.hpp"

namespace lulu {

namespace detail {

inline int connectivity_id(const Connectivity& conn) {
  if (conn == Connectivity::four()) return 4;
  if (conn == Connectivity::eight()) return 8;
  throw std::invalid_argument(
      "write_pulses: only 4- or 8-connectivity decompositions can be serialized");
}

[[noreturn]] inline void pulse_line_error(int line, const std::string& why) {
  throw std::runtime_error("read_pulses: line " + std::to_string(line) + ": " + why);
}

inline nlohmann::json parse_json_line(const std::string& text, int line) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) pulse_line_error(line, "not valid JSON");
  if (!j.is_object()) pulse_line_error(line, "expected a JSON object");
  return j;
}

inline int require_int(const nlohmann::json& j, const char* key, int line) {
  if (!j.contains(key))
    pulse_line_error(line, std::string("missing field \"") + key + "\"");
  const auto& v = j.at(key);
  if (!v.is_number_integer())
    pulse_line_error(line, std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

}  // namespace detail

// Serializes a decomposition as JSON lines: a header object first, then one
// object per pulse, layers ascending and pulses ordered by first support
// pixel. The byte output is deterministic for a given decomposition.
inline void write_pulses(const DptDecomposition& d,
                         const std::filesystem::path& path) {
  const int conn_id = detail::connectivity_id(d.connectivity);

  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("write_pulses: cannot open " + path.string() +
                             " for writing");

  nlohmann::json header;
  header["width"] = d.width;
  header["height"] = d.height;
  header["connectivity"] = conn_id;
  header["residual"] = d.residual_constant;
  header["complete"] = d.complete;
  out << header.dump() << '\n';

  for (const auto& [n, list] : d.layers) {
    std::vector<Pulse> ordered = list;
    detail::sort_pulses(ordered);
    for (const Pulse& pulse : ordered) {
      nlohmann::json j;
      j["n"] = n;
      j["amp"] = pulse.amplitude;
      nlohmann::json pixels = nlohmann::json::array();
      for (Pixel p : pulse.support)
        pixels.push_back(nlohmann::json::array({p.row, p.col}));
      j["pixels"] = std::move(pixels);
      out << j.dump() << '\n';
    }
  }
  if (!out)
    throw std::runtime_error("write_pulses: write to " + path.string() + " failed");
}

// Reads a pulse dump back. Every structural invariant is re-checked: schema
// errors carry the offending line number, and decompositions that violate
// support disjointness or nesting are rejected outright.
inline DptDecomposition read_pulses(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("read_pulses: cannot open " + path.string());

  std::string text;
  int line_no = 0;

  if (!std::getline(in, text))
    throw std::runtime_error("read_pulses: empty file, expected a header line");
  ++line_no;
  const nlohmann::json header = detail::parse_json_line(text, line_no);

  DptDecomposition d;
  d.width = detail::require_int(header, "width", line_no);
  d.height = detail::require_int(header, "height", line_no);
  if (d.width < 1 || d.height < 1)
    detail::pulse_line_error(line_no, "width and height must be positive");
  const int conn_id = detail::require_int(header, "connectivity", line_no);
  if (conn_id == 4) {
    d.connectivity = Connectivity::four();
  } else if (conn_id == 8) {
    d.connectivity = Connectivity::eight();
  } else {
    detail::pulse_line_error(line_no, "connectivity must be 4 or 8");
  }
  d.residual_constant = detail::require_int(header, "residual", line_no);
  d.complete = true;
  if (header.contains("complete")) {
    if (!header.at("complete").is_boolean())
      detail::pulse_line_error(line_no, "field \"complete\" must be a boolean");
    d.complete = header.at("complete").get<bool>();
  }

  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty()) continue;
    const nlohmann::json j = detail::parse_json_line(text, line_no);

    Pulse pulse;
    const int n = detail::require_int(j, "n", line_no);
    if (n < 1) detail::pulse_line_error(line_no, "\"n\" must be at least 1");
    pulse.amplitude = detail::require_int(j, "amp", line_no);
    if (pulse.amplitude == 0)
      detail::pulse_line_error(line_no, "\"amp\" must be nonzero");

    if (!j.contains("pixels") || !j.at("pixels").is_array())
      detail::pulse_line_error(line_no, "field \"pixels\" must be an array");
    std::vector<Pixel> pixels;
    for (const auto& pj : j.at("pixels")) {
      if (!pj.is_array() || pj.size() != 2 || !pj.at(0).is_number_integer() ||
          !pj.at(1).is_number_integer())
        detail::pulse_line_error(line_no, "each pixel must be a [row, col] pair");
      pixels.push_back({pj.at(0).get<int>(), pj.at(1).get<int>()});
    }
    if (static_cast<int>(pixels.size()) != n)
      detail::pulse_line_error(line_no, "\"pixels\" lists " +
                                            std::to_string(pixels.size()) +
                                            " entries but \"n\" is " +
                                            std::to_string(n));
    pulse.support = PixelSet::from_vector(std::move(pixels));
    if (static_cast<int>(pulse.support.size()) != n)
      detail::pulse_line_error(line_no, "duplicate pixel in support");

    d.layers[n].push_back(std::move(pulse));
  }

  for (auto& [n, list] : d.layers) detail::sort_pulses(list);

  const StructureReport report = detail::structural_checks(d);
  for (const StructureCheck& check : report.checks) {
    if (!check.pass)
      throw std::runtime_error("read_pulses: " + check.name + ": " + check.detail);
  }
  return d;
}

// Writes a pulse-size histogram as CSV with a "size,count" header row.
inline void write_histogram(const std::vector<std::pair<int, std::int64_t>>& hist,
                            const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("write_histogram: cannot open " + path.string() +
                             " for writing");
  out << "size,count\n";
  for (const auto& [size, count] : hist) out << size << ',' << count << '\n';
  if (!out)
    throw std::runtime_error("write_histogram: write to " + path.string() +
                             " failed");
}

}  // namespace lulu

#endif  // LULU_PULSE_IO_HPP
