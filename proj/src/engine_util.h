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

#ifndef SSREG_SRC_ENGINE_UTIL_H_
#define SSREG_SRC_ENGINE_UTIL_H_

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "ssreg/error.h"
#include "ssreg/protocols.h"
#include "ssreg/ring.h"

namespace ssreg::internal {

inline void CheckLabels(const std::vector<double>& y, Task task) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    SSREG_ENFORCE(std::isfinite(y[i]), ErrorCode::kLabelDomainError,
                  "label " + std::to_string(i) + " is not finite");
    if (task == Task::kLogistic) {
      SSREG_ENFORCE(y[i] == 0.0 || y[i] == 1.0, ErrorCode::kLabelDomainError,
                    "logistic label " + std::to_string(i) + " is " +
                        std::to_string(y[i]) + ", expected 0 or 1");
    }
  }
}

inline RingMatrix EncodeColumn(const std::vector<double>& v,
                               const FixedPointConfig& cfg) {
  RingMatrix out(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) out(i, 0) = Encode(v[i], cfg).raw;
  return out;
}

class StepTimer {
 public:
  StepTimer() : start_(std::chrono::steady_clock::now()) {}
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace ssreg::internal

#endif  // SSREG_SRC_ENGINE_UTIL_H_
