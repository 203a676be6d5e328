// support/cli-harness.h


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

#ifndef BARGEBENCH_TESTS_SUPPORT_CLI_HARNESS_H_
#define BARGEBENCH_TESTS_SUPPORT_CLI_HARNESS_H_

#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bargebench/cli/commands.h"

namespace bargebench::testing {

struct CliRun {
  int code = 0;
  std::string out, err;

  /// Value of the first "key=value" stdout line with this key.
  std::string Get(const std::string &key) const {
    std::istringstream is(out);
    for (std::string line; std::getline(is, line);)
      if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
    return "<missing " + key + ">";
  }
};

inline CliRun Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "bargebench");
  std::ostringstream out, err;
  CliRun r;
  r.code = RunCli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path ScratchDir(const std::string &name) {
  auto d = std::filesystem::temp_directory_path() / ("bargebench-" + name);
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace bargebench::testing

#endif  // BARGEBENCH_TESTS_SUPPORT_CLI_HARNESS_H_
