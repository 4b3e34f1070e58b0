// Copyright 2026 The fakenight Authors
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

#ifndef FAKENIGHT_CORE_PROCESS_HPP
#define FAKENIGHT_CORE_PROCESS_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace fakenight {

/// POSIX single-quote escaping for interpolation into /bin/sh command lines.
std::string shell_quote(const std::string &arg);

/// Appends each argument, quoted, to the command template.
std::string build_command(const std::string &command_template, const std::vector<std::string> &args);

struct ProcessResult {
  int exit_code = -1;  // 128 + signal when killed
};

/// Runs `command` with /bin/sh -c; stdout and stderr are appended to `log_path`.
ProcessResult run_shell_command(const std::string &command, const std::filesystem::path &log_path);

}  // namespace fakenight

#endif  // FAKENIGHT_CORE_PROCESS_HPP
