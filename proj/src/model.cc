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

#include "ssreg/model.h"

#include <cmath>
#include <string>

#include "ssreg/error.h"

namespace ssreg {

std::string_view TaskName(Task t) {
  return t == Task::kLinear ? "LiRe" : "LoRe";
}

Task ParseTask(std::string_view name) {
  if (name == "LiRe" || name == "linear") return Task::kLinear;
  if (name == "LoRe" || name == "logistic") return Task::kLogistic;
  throw Error(ErrorCode::kConfigError,
              "unknown task '" + std::string(name) + "'");
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace ssreg
