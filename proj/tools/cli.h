// Copyright 2026 The tsvf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TSVF_TOOLS_CLI_H
#define TSVF_TOOLS_CLI_H

#include <ostream>
#include <string>
#include <vector>

#include "tsvf/linalg.h"

namespace tsvf::cli {

enum ExitCode : int {
    kOk = 0,
    kFailedChecks = 1,
    kInputError = 2,
    kUndefined = 3,
    kRejected = 4,
};

// Qubit shorthands: up-z, down-z, up-x, down-x, up-y, down-y, spin:THETA[:PHI].
StateVector parse_state(const std::string &text);

// pauli-x, pauli-y, pauli-z, spin:THETA[:PHI].
SpectralObservable parse_observable(const std::string &text);

// Observable shorthands joined by '*', e.g. pauli-z*pauli-x.
LinearOperator parse_operator(const std::string &text);

// args excludes the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace tsvf::cli

#endif
