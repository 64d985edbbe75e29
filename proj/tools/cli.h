// Copyright 2026 The pdd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PDD_TOOLS_CLI_H_
#define PDD_TOOLS_CLI_H_

namespace pdd {

// Exit statuses of the pdd tool.
enum ExitCode {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitInternal = 3,
};

// Entry point of `pdd train|link|build-graph|eval|synth`. Returns an ExitCode.
int RunPdd(int argc, const char *const *argv);

}  // namespace pdd

#endif  // PDD_TOOLS_CLI_H_
