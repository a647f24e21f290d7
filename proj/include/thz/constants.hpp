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

#ifndef THZ_CONSTANTS_HPP
#define THZ_CONSTANTS_HPP

namespace thz {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s (exact)
inline constexpr double kBoltzmann = 1.380649e-23;    // J/K (exact)

}  // namespace thz

#endif
