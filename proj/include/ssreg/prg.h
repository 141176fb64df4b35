/*
 * Copyright 2026 The ssreg Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SSREG_PRG_H_
#define SSREG_PRG_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace ssreg {

// Seedable ChaCha20 keystream generator. The key is BLAKE2b(seed || stream),
// so (seed, stream) pairs give independent streams and equal pairs replay the
// same bytes on every machine.
class Prg {
 public:
  explicit Prg(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t NextU64();
  void Fill(std::span<std::uint64_t> out);
  // Uniform in [0, bound) without modulo bias. bound must be nonzero.
  std::uint64_t Uniform(std::uint64_t bound);
  // Uniform double in [0, 1) with 53 random bits.
  double NextDouble();
  double NextGaussian();

 private:
  void Refill();

  std::array<std::uint8_t, 32> key_{};
  std::uint32_t block_counter_ = 0;
  std::uint64_t nonce_epoch_ = 0;
  std::array<std::uint64_t, 64> buffer_{};
  std::size_t pos_ = 64;
};

// Derives a child seed from a parent seed and a label, e.g. per party or per
// purpose. Stable across platforms.
std::uint64_t DeriveSeed(std::uint64_t parent, std::string_view label,
                         std::uint64_t index = 0);

// 32-byte BLAKE2b digest rendered as lowercase hex.
std::string HexDigest(std::span<const std::uint8_t> bytes);

}  // namespace ssreg

#endif  // SSREG_PRG_H_
