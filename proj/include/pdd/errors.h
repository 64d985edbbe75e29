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

#ifndef PDD_ERRORS_H_
#define PDD_ERRORS_H_

#include <stdexcept>
#include <string>

namespace pdd {

// Input data is malformed or violates a record invariant.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string &what) : std::runtime_error(what) {}
};

// A run configuration is invalid: bad numeric range, missing path, bad flag.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

}  // namespace pdd

#endif  // PDD_ERRORS_H_
