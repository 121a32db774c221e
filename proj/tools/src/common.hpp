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

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "cgm/errors.hpp"

namespace cgmcli {

/// Stems of *.png files in a directory, sorted.
std::vector<std::string> list_png_stems(const std::string& dir);

/// Stems present in both directories, sorted; missing partners are reported
/// through the unmatched list.
std::vector<std::string> match_stems(const std::string& a_dir, const std::string& b_dir,
                                     std::vector<std::string>* unmatched);

inline std::string png_path(const std::string& dir, const std::string& stem) {
    return (std::filesystem::path(dir) / (stem + ".png")).string();
}

inline void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw cgm::IoError("cannot create output directory: " + dir);
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw cgm::IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw cgm::IoError("write failed: " + path);
}

} // namespace cgmcli
