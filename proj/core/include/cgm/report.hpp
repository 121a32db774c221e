// Copyright 2026 The cgm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <string>
#include <vector>

namespace cgm {

/// Deterministic report emission: RFC-4180-style CSV quoting and Markdown
/// tables. Numbers are formatted with fixed precision so identical inputs
/// produce byte-identical artifacts.

/// Quotes a field if it contains a comma, quote or newline; embedded quotes
/// are doubled.
std::string csv_escape(const std::string& field);

std::string csv_row(const std::vector<std::string>& fields);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double value);

/// Fixed-precision formatting for table eyeballing.
std::string format_fixed(double value, int digits);

/// "# key=value" comment lines, sorted by key; embedded in every report so
/// reruns are auditable.
std::string config_header(const std::map<std::string, std::string>& config);

struct MarkdownTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string render() const;
};

} // namespace cgm
