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

#include <string>

#include "cgm/image.hpp"

namespace cgm {

/// PNG ingestion and persistence. 8-bit files are required for writing;
/// 8- and 16-bit files are accepted on read. Values are scaled to [0,1]
/// (v/255 or v/65535). Errors raise IoError carrying the path and cause.

/// Loads a grayscale or RGB(A) PNG as an RGB image. Grayscale is replicated
/// to three channels; alpha is dropped.
Image load_image(const std::string& path);

/// Loads a single-effective-channel PNG as a hard mask: pixel -> 1 iff its
/// intensity is >= 128/255 of full scale. Multi-channel files with unequal
/// channels are rejected.
BinaryMask load_mask(const std::string& path);

/// Loads a single-effective-channel PNG as probabilities (v / full scale).
ProbabilityMap load_probability(const std::string& path);

/// Loads an 8-bit grayscale PNG whose bytes are all in {0,128,255}.
Trimap load_trimap(const std::string& path);

/// Writes an 8-bit grayscale PNG with bytes exactly {0,128,255}; round-trips
/// losslessly through load_trimap.
void save_trimap(const Trimap& trimap, const std::string& path);

/// Writes a grayscale PNG of round(q * 255) (or * 65535 with sixteen_bit).
void save_probability(const ProbabilityMap& map, const std::string& path, bool sixteen_bit = false);

/// Writes a 0/255 grayscale PNG.
void save_mask(const BinaryMask& mask, const std::string& path);

/// Writes an 8-bit RGB PNG of round(v * 255).
void save_image(const Image& image, const std::string& path);

} // namespace cgm
