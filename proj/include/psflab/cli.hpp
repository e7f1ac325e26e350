/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The psflab Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PSFLAB_CLI_HPP
#define PSFLAB_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace psflab::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationError = 1,
  kIoError = 2,
};

/// Runs the command line `args` (args[0] is the program name). Never throws;
/// failures are reported on `err` and mapped to an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace psflab::cli

#endif  // PSFLAB_CLI_HPP
