// Copyright 2026 The gevmiss Authors
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

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gevmiss::csv {

// Shortest representation that reads back to the same double.
std::string format_double(double v);

// Parses a whole field as a double; false on failure or trailing garbage.
bool parse_double(std::string_view field, double& out);

// Splits on commas and trims surrounding whitespace and a trailing '\r'.
std::vector<std::string> split(std::string_view line);

std::string join(const std::vector<std::string>& fields);

}  // namespace gevmiss::csv
