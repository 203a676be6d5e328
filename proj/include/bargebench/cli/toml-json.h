// cli/toml-json.h


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

// TOML documents as JSON values, so the config readers can stay JSON-only.

#ifndef BARGEBENCH_CLI_TOML_JSON_H_
#define BARGEBENCH_CLI_TOML_JSON_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

namespace bargebench {

/// Parses TOML text.  Tables become objects (key order kept), integers
/// int64, floats double.  Dates and times are rejected.  Throws ConfigError
/// carrying the source position on a syntax error.
nlohmann::ordered_json ParseToml(std::string_view text,
                                 const std::string &source_name);

/// ParseToml on a file; IoError if unreadable.
nlohmann::ordered_json ReadTomlFile(const std::filesystem::path &path);

/// Renders a JSON object as TOML.  Floats print with round-trip precision.
/// Nulls are dropped.  Throws ConfigError for a non-object root or an array
/// mixing tables with other values.
std::string JsonToToml(const nlohmann::ordered_json &j);

}  // namespace bargebench

#endif  // BARGEBENCH_CLI_TOML_JSON_H_
