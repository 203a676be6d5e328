// common/file-util.h

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

#ifndef BARGEBENCH_COMMON_FILE_UTIL_H_
#define BARGEBENCH_COMMON_FILE_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace bargebench {

/// Writes through "<path>.tmp" and renames over path.  Throws IoError.
void WriteFileAtomic(const std::filesystem::path &path, std::string_view data);

/// Whole file as bytes.  Throws IoError.
std::string ReadFile(const std::filesystem::path &path);

/// FNV-1a 64.
uint64_t Fnv1a64(std::string_view bytes);

}  // namespace bargebench

#endif  // BARGEBENCH_COMMON_FILE_UTIL_H_
