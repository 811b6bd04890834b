#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "kpp/errors.hpp"

namespace kpp::json_util {

using json = nlohmann::json;

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  return j;
}

inline const json& require_field(const json& j, const std::string& key, const std::string& path) {
  require_object(j, path);
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(join(path, key) + ": missing required field");
  return *it;
}

inline double get_number(const json& j, const std::string& key, const std::string& path) {
  const json& v = require_field(j, key, path);
  if (!v.is_number()) throw ConfigError(join(path, key) + ": expected a number");
  return v.get<double>();
}

inline double get_number_or(const json& j, const std::string& key, const std::string& path,
                            double fallback) {
  require_object(j, path);
  if (!j.contains(key)) return fallback;
  return get_number(j, key, path);
}

inline std::string get_string(const json& j, const std::string& key, const std::string& path) {
  const json& v = require_field(j, key, path);
  if (!v.is_string()) throw ConfigError(join(path, key) + ": expected a string");
  return v.get<std::string>();
}

inline bool get_bool_or(const json& j, const std::string& key, const std::string& path,
                        bool fallback) {
  require_object(j, path);
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError(join(path, key) + ": expected a boolean");
  return v.get<bool>();
}

inline std::vector<double> get_number_array(const json& j, const std::string& key,
                                            const std::string& path) {
  const json& v = require_field(j, key, path);
  if (!v.is_array()) throw ConfigError(join(path, key) + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      throw ConfigError(join(path, key) + "[" + std::to_string(i) + "]: expected a number");
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

}  // namespace kpp::json_util
