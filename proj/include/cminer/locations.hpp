// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <string>
#include <string_view>
#include <unordered_map>

#include "cminer/errors.hpp"
#include "cminer/strings.hpp"

namespace cminer {

class UnmappedSensor : public Error {
 public:
  explicit UnmappedSensor(const std::string& sensor_id)
      : Error("sensor id has no location mapping: " + sensor_id), sensor_id_(sensor_id) {}
  const std::string& sensor_id() const { return sensor_id_; }

 private:
  std::string sensor_id_;
};

// sensor_id → location phrase ("Kitchen", "between the Living room and home
// entrance aisle", ...). Phrases are non-empty.
struct LocationMap {
  std::unordered_map<std::string, std::string> mapping;

  const std::string& lookup(const std::string& sensor_id) const {
    auto it = mapping.find(sensor_id);
    if (it == mapping.end()) throw UnmappedSensor(sensor_id);
    return it->second;
  }

  bool contains(const std::string& sensor_id) const { return mapping.count(sensor_id) > 0; }

  // CSV rows sensor_id,location_phrase; phrases with commas are quoted.
  // A "sensor_id,..." header row is skipped.
  static LocationMap load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open locations file: " + path);
    LocationMap map;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      auto trimmed = strings::trim(line);
      if (trimmed.empty() || trimmed.front() == '#') continue;
      auto fields = strings::parse_csv_row(trimmed);
      if (fields.size() != 2) throw Error("locations row needs 2 fields: " + line);
      std::string id = std::string(strings::trim(fields[0]));
      std::string phrase = std::string(strings::trim(fields[1]));
      if (first && id == "sensor_id") {
        first = false;
        continue;
      }
      first = false;
      if (phrase.empty()) throw Error("empty location phrase for sensor " + id);
      map.mapping[id] = phrase;
    }
    return map;
  }
};

}  // namespace cminer
