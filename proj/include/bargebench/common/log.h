// common/log.h

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

#ifndef BARGEBENCH_COMMON_LOG_H_
#define BARGEBENCH_COMMON_LOG_H_

#include <spdlog/spdlog.h>

namespace bargebench {

/// Sets the stderr log level from BARGEBENCH_LOG (trace, debug, info, warn,
/// error, off).  Unset means "warn".  Safe to call more than once.
void InitLogging();

}  // namespace bargebench

#endif  // BARGEBENCH_COMMON_LOG_H_
