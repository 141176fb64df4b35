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

#ifndef SSREG_TRANSPORT_INL_H_
#define SSREG_TRANSPORT_INL_H_

#include <exception>
#include <thread>

#include "ssreg/error.h"

namespace ssreg {

template <typename Fn>
void RunLoopbackParties(std::size_t num_parties, Fn&& fn,
                        SessionOptions options) {
  auto hub = LoopbackHub::Create(num_parties);
  std::vector<std::exception_ptr> errors(num_parties);
  std::vector<std::thread> threads;
  threads.reserve(num_parties);
  for (PartyId p = 0; p < num_parties; ++p) {
    threads.emplace_back([&, p] {
      Session session(hub->Connect(p), options);
      try {
        fn(session);
      } catch (...) {
        errors[p] = std::current_exception();
      }
      session.Close();
    });
  }
  for (auto& t : threads) t.join();
  // Prefer the root cause over the PeerClosed errors it cascades into.
  std::exception_ptr first;
  for (auto& e : errors) {
    if (!e) continue;
    if (!first) first = e;
    try {
      std::rethrow_exception(e);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kPeerClosed &&
          err.code() != ErrorCode::kRecvTimeout) {
        throw;
      }
    } catch (...) {
      throw;
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace ssreg

#endif  // SSREG_TRANSPORT_INL_H_
