// SPDX-License-Identifier: Apache-2.0
//
// hcm - hybrid geometry-based stochastic channel model for V2V/V2I simulation
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

#ifndef HCM_DIGEST_HPP
#define HCM_DIGEST_HPP

#include <string>
#include <string_view>

namespace hcm
{

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::string &path);

} // namespace hcm

#endif
