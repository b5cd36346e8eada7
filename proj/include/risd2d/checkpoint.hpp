// Copyright 2026 The risd2d Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>

#include "risd2d/neuralnet.hpp"

namespace risd2d::nn {

// Checkpoint layout, all integers and floats little-endian:
//
//   offset  size  field
//   0       8     magic "RISQNET\0"
//   8       4     u32 format version (1)
//   12      4     u32 has_conv (0 or 1)
//   16      8     u64 columns U
//   24      8     u64 conv maps Lambda (0 without conv)
//   32      8     u64 kernel width mu (0 without conv)
//   40      8     u64 hidden units
//   48      8     u64 output units
//   56      8     u64 parameter count P
//   64      8P    f64 parameters in QParams::flatten() order
//
// Tensors are layer ordered (conv kernels, conv bias, hidden weights, hidden
// bias, output weights, output bias), each row-major.

void write_checkpoint(std::ostream& out, const QNetwork<double>& net);
QNetwork<double> read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const QNetwork<double>& net);
QNetwork<double> load_checkpoint(const std::filesystem::path& path);

}  // namespace risd2d::nn
