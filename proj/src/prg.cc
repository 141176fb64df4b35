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

#include "ssreg/prg.h"

#include <sodium.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

namespace ssreg {
namespace {

void EnsureSodium() {
  static const int init = sodium_init();
  (void)init;
}

void PutU64(std::uint64_t v, std::uint8_t* out) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

}  // namespace

Prg::Prg(std::uint64_t seed, std::uint64_t stream) {
  EnsureSodium();
  std::uint8_t material[16];
  PutU64(seed, material);
  PutU64(stream, material + 8);
  crypto_generichash(key_.data(), key_.size(), material, sizeof(material),
                     nullptr, 0);
}

void Prg::Refill() {
  static_assert(sizeof(buffer_) % 64 == 0);
  constexpr std::uint32_t kBlocks = sizeof(buffer_) / 64;
  if (block_counter_ > UINT32_MAX - kBlocks) {
    ++nonce_epoch_;
    block_counter_ = 0;
  }
  std::uint8_t nonce[crypto_stream_chacha20_IETF_NONCEBYTES] = {};
  PutU64(nonce_epoch_, nonce);
  std::uint8_t bytes[sizeof(buffer_)] = {};
  crypto_stream_chacha20_ietf_xor_ic(bytes, bytes, sizeof(bytes), nonce,
                                     block_counter_, key_.data());
  block_counter_ += kBlocks;
  for (std::size_t i = 0; i < buffer_.size(); ++i) {
    std::uint64_t v = 0;
    for (int b = 7; b >= 0; --b) v = (v << 8) | bytes[i * 8 + b];
    buffer_[i] = v;
  }
  pos_ = 0;
}

std::uint64_t Prg::NextU64() {
  if (pos_ == buffer_.size()) Refill();
  return buffer_[pos_++];
}

void Prg::Fill(std::span<std::uint64_t> out) {
  for (auto& v : out) v = NextU64();
}

std::uint64_t Prg::Uniform(std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t r = NextU64();
    if (r >= threshold) return r % bound;
  }
}

double Prg::NextDouble() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double Prg::NextGaussian() {
  double u1 = NextDouble();
  while (u1 <= 0.0) u1 = NextDouble();
  const double u2 = NextDouble();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t DeriveSeed(std::uint64_t parent, std::string_view label,
                         std::uint64_t index) {
  EnsureSodium();
  std::vector<std::uint8_t> material(16 + label.size());
  PutU64(parent, material.data());
  PutU64(index, material.data() + 8);
  std::memcpy(material.data() + 16, label.data(), label.size());
  std::uint8_t digest[8];
  crypto_generichash(digest, sizeof(digest), material.data(), material.size(),
                     nullptr, 0);
  std::uint64_t v = 0;
  for (int b = 7; b >= 0; --b) v = (v << 8) | digest[b];
  return v;
}

std::string HexDigest(std::span<const std::uint8_t> bytes) {
  EnsureSodium();
  std::uint8_t digest[32];
  crypto_generichash(digest, sizeof(digest), bytes.data(), bytes.size(),
                     nullptr, 0);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (std::uint8_t b : digest) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xf]);
  }
  return out;
}

}  // namespace ssreg
