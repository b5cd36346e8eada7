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

#include "risd2d/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace risd2d::nn {

namespace {

constexpr std::array<char, 8> kMagic = {'R', 'I', 'S', 'Q', 'N', 'E', 'T', '\0'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> bytes{};
  for (std::size_t b = 0; b < sizeof(T); ++b) bytes[b] = static_cast<unsigned char>((value >> (8 * b)) & 0xff);
  out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  T value = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) value |= static_cast<T>(bytes[b]) << (8 * b);
  return value;
}

}  // namespace

void write_checkpoint(std::ostream& out, const QNetwork<double>& net) {
  const NetworkArch& arch = net.arch();
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint32_t>(out, arch.has_conv() ? 1 : 0);
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(arch.columns));
  put_le<std::uint64_t>(out, arch.has_conv() ? static_cast<std::uint64_t>(arch.conv->num_maps) : 0);
  put_le<std::uint64_t>(out, arch.has_conv() ? static_cast<std::uint64_t>(arch.conv->kernel_width) : 0);
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(arch.hidden_units));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(arch.output_units));
  const Vector<double> flat = net.params().flatten();
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(flat.size()));
  for (Index i = 0; i < flat.size(); ++i) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(flat[i]));
  if (!out) throw std::runtime_error("checkpoint: write failed");
}

QNetwork<double> read_checkpoint(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw std::runtime_error("checkpoint: bad magic");
  if (get_le<std::uint32_t>(in) != kVersion) throw std::runtime_error("checkpoint: unsupported version");
  const bool has_conv = get_le<std::uint32_t>(in) != 0;
  NetworkArch arch;
  arch.columns = static_cast<Index>(get_le<std::uint64_t>(in));
  const auto maps = static_cast<Index>(get_le<std::uint64_t>(in));
  const auto width = static_cast<Index>(get_le<std::uint64_t>(in));
  if (has_conv) arch.conv = ConvSpec{maps, width};
  arch.hidden_units = static_cast<Index>(get_le<std::uint64_t>(in));
  arch.output_units = static_cast<Index>(get_le<std::uint64_t>(in));
  QNetwork<double> net(arch);
  const auto count = static_cast<Index>(get_le<std::uint64_t>(in));
  if (count != net.params().size()) throw std::runtime_error("checkpoint: parameter count does not match architecture");
  Vector<double> flat(count);
  for (Index i = 0; i < count; ++i) flat[i] = std::bit_cast<double>(get_le<std::uint64_t>(in));
  net.params().assign(flat);
  return net;
}

void save_checkpoint(const std::filesystem::path& path, const QNetwork<double>& net) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path.string() + " for writing");
  write_checkpoint(out, net);
}

QNetwork<double> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace risd2d::nn
