/*
 * Copyright 2026 The vplat Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vplat {

/// Every failure the library reports carries one of these codes so callers
/// (tests, the CLI exit-status mapping) can branch on the kind of error
/// without parsing messages.
enum class Errc {
  kIllegalInstruction,
  kMisalignedEntry,
  kOverlappingRegions,
  kMisalignedRegion,
  kSyntaxError,
  kUnknownKey,
  kUnknownDeviceKind,
  kMissingField,
  kInvalidValue,
  kDuplicateId,
  kEntryOutsideMap,
  kUnknownTarget,
  kUnknownDeviceFault,
  kDuplicateFaultId,
  kInvalidLocus,
  kInvalidFault,
  kUnsupportedImage,
  kSegmentOutsideMap,
  kMalformedTrace,
  kLayoutMismatch,
  kMalformedCoverage,
  kIo,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace vplat
