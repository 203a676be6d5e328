// common/log.cc

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

#include "bargebench/common/log.h"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_sinks.h>

namespace bargebench {

void InitLogging() {
  static bool initialized = false;
  if (!initialized) {
    auto logger = spdlog::stderr_logger_st("bargebench");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    initialized = true;
  }
  const char *env = std::getenv("BARGEBENCH_LOG");
  std::string level = env ? env : "warn";
  spdlog::set_level(spdlog::level::from_str(level));
}

}  // namespace bargebench
