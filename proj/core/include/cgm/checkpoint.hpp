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

#include <cstdint>
#include <map>
#include <string>

#include "cgm/autodiff.hpp"

namespace cgm {

/// Versioned little-endian binary checkpoint: magic "CGMCKPT1", u32 version,
/// u64 step, then named tensors with shape headers. float32 payloads are
/// written bit-exactly, so save/load round-trips are lossless.

struct Checkpoint {
    std::uint64_t step = 0;
    std::map<std::string, Tensor> tensors;
};

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

} // namespace cgm
