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

#ifndef SSREG_MODEL_H_
#define SSREG_MODEL_H_

#include <string_view>

namespace ssreg {

enum class Task { kLinear, kLogistic };

std::string_view TaskName(Task t);  // "LiRe" / "LoRe"
Task ParseTask(std::string_view name);

// Cubic stand-in for the logistic function: q0 + q1 z + q2 z^2 + q3 z^3.
struct SigmoidCoefficients {
  double q0 = 0.5;
  double q1 = 0.197;
  double q2 = 0.0;
  double q3 = 0.004;

  double Eval(double z) const { return q0 + z * (q1 + z * (q2 + z * q3)); }
  friend bool operator==(const SigmoidCoefficients&,
                         const SigmoidCoefficients&) = default;
};

double Sigmoid(double z);

}  // namespace ssreg

#endif  // SSREG_MODEL_H_
