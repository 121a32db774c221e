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

#include "common.hpp"

#include <algorithm>

namespace fs = std::filesystem;

namespace cgmcli {

std::vector<std::string> list_png_stems(const std::string& dir) {
    if (!fs::is_directory(dir)) {
        throw cgm::IoError("not a directory: " + dir);
    }
    std::vector<std::string> stems;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (ext == ".png") stems.push_back(entry.path().stem().string());
    }
    std::sort(stems.begin(), stems.end());
    return stems;
}

std::vector<std::string> match_stems(const std::string& a_dir, const std::string& b_dir,
                                     std::vector<std::string>* unmatched) {
    const auto a = list_png_stems(a_dir);
    const auto b = list_png_stems(b_dir);
    std::vector<std::string> matched;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(matched));
    if (unmatched) {
        std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                      std::back_inserter(*unmatched));
    }
    return matched;
}

} // namespace cgmcli
