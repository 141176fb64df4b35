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

#ifndef SSREG_ERROR_H_
#define SSREG_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ssreg {

enum class ErrorCode {
  kMagnitudeOverflow,
  kDimensionMismatch,
  kInvalidArgument,
  kInvalidPartyCount,
  kTripleExhausted,
  kMalformedTranscript,
  kTransportError,
  kConnectTimeout,
  kRosterMismatch,
  kUnexpectedKind,
  kPeerClosed,
  kDeserializeError,
  kBarrierTimeout,
  kRecvTimeout,
  kPolicyMismatch,
  kSampleCountMismatch,
  kLabelDomainError,
  kBatchTooLarge,
  kNonFiniteLoss,
  kEmptyInput,
  kSingleClassError,
  kTooFewSamples,
  kParseError,
  kMissingLabelColumn,
  kTooFewColumns,
  kTooFewRows,
  kConfigError,
  kSpecHashMismatch,
  kPartyCrashed,
  kHashMismatch,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All failures surface as ssreg::Error; the code identifies the contract that
// was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

#define SSREG_ENFORCE(cond, code, msg)           \
  do {                                           \
    if (!(cond)) throw ::ssreg::Error(code, msg); \
  } while (0)

}  // namespace ssreg

#endif  // SSREG_ERROR_H_
