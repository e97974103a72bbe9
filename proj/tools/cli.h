// tools/cli.h

// Copyright 2026  heatkit authors
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

#ifndef HEAT_TOOLS_CLI_H_
#define HEAT_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "heat/heatcore.h"
#include "heat/scoring.h"

namespace heat::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kUnsupported = 3,
};

// Shared knobs; defaults mirror the library defaults.
struct Config {
  double frame_len = FrameGrid::kDefaultFrameLen;
  Heuristic heuristic = Heuristic::kSpeakerContinuity;
  OverflowPolicy overflow = OverflowPolicy::kForce;
  double collar = 5.0;
  bool normalize = true;
  int jobs = 1;
};

// Runs `heat <args...>` (args exclude the program name). Output files are
// written directly; everything else goes to `out` / `err`.
int Run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

}  // namespace heat::cli

#endif  // HEAT_TOOLS_CLI_H_
