// Copyright 2026 The atrc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ATRC_CONFIG_HPP_
#define ATRC_CONFIG_HPP_

#include <map>
#include <string>

namespace atrc {

// key=value lines; blank lines and '#' comments ignored; surrounding
// whitespace trimmed. Later duplicates win.
std::map<std::string, std::string> load_kv_file(const std::string& path);

}  // namespace atrc

#endif  // ATRC_CONFIG_HPP_
