// cli/toml-json.cc


// Copyright 2026  The BargeBench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "bargebench/cli/toml-json.h"

#include <cctype>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#define TOML_EXCEPTIONS 1
#include "toml.hpp"

#include "bargebench/common/error.h"
#include "bargebench/common/file-util.h"

namespace bargebench {

namespace {

using Json = nlohmann::ordered_json;

Json FromNode(const toml::node &node, const std::string &where) {
  if (auto *t = node.as_table()) {
    Json j = Json::object();
    for (auto &&[k, v] : *t) {
      const std::string key(k.str());
      j[key] = FromNode(v, where.empty() ? key : where + "." + key);
    }
    return j;
  }
  if (auto *a = node.as_array()) {
    Json j = Json::array();
    for (size_t i = 0; i < a->size(); ++i)
      j.push_back(FromNode(*a->get(i), where + "[" + std::to_string(i) + "]"));
    return j;
  }
  if (auto *v = node.as_string()) return v->get();
  if (auto *v = node.as_integer()) return v->get();
  if (auto *v = node.as_floating_point()) return v->get();
  if (auto *v = node.as_boolean()) return v->get();
  throw ConfigError(where + ": dates and times are not supported");
}

std::string Key(const std::string &k) {
  bool bare = !k.empty();
  for (char c : k)
    bare &= std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  return bare ? k : Json(k).dump();
}

std::string Scalar(const Json &v) {
  if (v.is_string()) return Json(v.get<std::string>()).dump();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return v.dump();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isnan(d)) return "nan";
    if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
    std::string s = fmt::format("{}", d);  // shortest round-trip form
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
  }
  if (v.is_array()) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) {
      if (v[i].is_object() || v[i].is_array())
        throw ConfigError("nested arrays and arrays of tables are not rendered");
      s += (i ? ", " : "") + Scalar(v[i]);
    }
    return s + "]";
  }
  throw ConfigError("value cannot be rendered as TOML: " + v.dump());
}

void Emit(const Json &table, const std::string &prefix, std::string *out) {
  for (const auto &[k, v] : table.items())
    if (!v.is_object() && !v.is_null()) *out += Key(k) + " = " + Scalar(v) + "\n";
  for (const auto &[k, v] : table.items()) {
    if (!v.is_object()) continue;
    const std::string name = prefix.empty() ? Key(k) : prefix + "." + Key(k);
    *out += "\n[" + name + "]\n";
    Emit(v, name, out);
  }
}

}  // namespace

Json ParseToml(std::string_view text, const std::string &source_name) {
  toml::table tbl;
  try {
    tbl = toml::parse(text, source_name);
  } catch (const toml::parse_error &e) {
    std::ostringstream os;
    os << e.source();
    throw ConfigError(fmt::format("{}: {}", os.str(), e.description()));
  }
  return FromNode(tbl, "");
}

Json ReadTomlFile(const std::filesystem::path &path) {
  return ParseToml(ReadFile(path), path.string());
}

std::string JsonToToml(const Json &j) {
  if (!j.is_object()) throw ConfigError("TOML root must be a table");
  std::string out;
  Emit(j, "", &out);
  return out;
}

}  // namespace bargebench
