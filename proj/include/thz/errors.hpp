// SPDX-License-Identifier: Apache-2.0
//
// thzmimo - terahertz massive-MIMO channel capacity simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef THZ_ERRORS_HPP
#define THZ_ERRORS_HPP

#include <stdexcept>

namespace thz {

// Malformed or inconsistent input data (spectrum files, mixture files,
// out-of-range sampling). Maps to CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid scenario or command-line configuration. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace thz

#endif
