// Copyright 2026 The clab Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace clab {

/// Raised when a numerical routine cannot produce a trustworthy result
/// (eigensolver failure, non-finite values, ...). Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised on violated preconditions that stem from user input. Maps to CLI
/// exit code 2 when surfaced from configuration.
class ConfigError : public std::invalid_argument {
  public:
    ConfigError(std::string path, const std::string &message)
        : std::invalid_argument(path + ": " + message), path_(std::move(path)) {}

    const std::string &path() const noexcept { return path_; }

  private:
    std::string path_;
};

}  // namespace clab
