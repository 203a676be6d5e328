// cli/commands.h


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

// The bargebench subcommands.  stdout carries key=value lines only; logs go
// to stderr.

#ifndef BARGEBENCH_CLI_COMMANDS_H_
#define BARGEBENCH_CLI_COMMANDS_H_

#include <exception>
#include <ostream>
#include <string>
#include <vector>

#include "bargebench/cli/run-config.h"

namespace bargebench {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // anything unclassified
  kExitConfig = 2,
  kExitIo = 3,
  kExitNumeric = 4,
};

/// ConfigError, ShapeError, GeometryError, NotApplicableError -> 2;
/// IoError, FormatError -> 3; NumericError, DegenerateSignalError -> 4.
int ExitCodeFor(const std::exception &e);

/// Each command creates cfg.out, writes resolved.toml there, echoes the
/// resolved config and then runs.  Nothing is written outside cfg.out.
void RunSimulate(const RunConfig &cfg, std::ostream &out);
void RunAec(const RunConfig &cfg, std::ostream &out);
void RunTrain(const RunConfig &cfg, std::ostream &out);
void RunEval(const RunConfig &cfg, std::ostream &out);
void RunReport(const RunConfig &cfg, std::ostream &out);

/// Parses args (args[0] is the program name), runs the subcommand and
/// returns the exit code.  Errors are printed to err as "error: ...".
int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace bargebench

#endif  // BARGEBENCH_CLI_COMMANDS_H_
