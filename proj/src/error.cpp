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

#include "vplat/error.hpp"

namespace vplat {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kIllegalInstruction: return "IllegalInstruction";
    case Errc::kMisalignedEntry: return "MisalignedEntry";
    case Errc::kOverlappingRegions: return "OverlappingRegions";
    case Errc::kMisalignedRegion: return "MisalignedRegion";
    case Errc::kSyntaxError: return "SyntaxError";
    case Errc::kUnknownKey: return "UnknownKey";
    case Errc::kUnknownDeviceKind: return "UnknownDeviceKind";
    case Errc::kMissingField: return "MissingField";
    case Errc::kInvalidValue: return "InvalidValue";
    case Errc::kDuplicateId: return "DuplicateId";
    case Errc::kEntryOutsideMap: return "EntryOutsideMap";
    case Errc::kUnknownTarget: return "UnknownTarget";
    case Errc::kUnknownDeviceFault: return "UnknownDeviceFault";
    case Errc::kDuplicateFaultId: return "DuplicateFaultId";
    case Errc::kInvalidLocus: return "InvalidLocus";
    case Errc::kInvalidFault: return "InvalidFault";
    case Errc::kUnsupportedImage: return "UnsupportedImage";
    case Errc::kSegmentOutsideMap: return "SegmentOutsideMap";
    case Errc::kMalformedTrace: return "MalformedTrace";
    case Errc::kLayoutMismatch: return "LayoutMismatch";
    case Errc::kMalformedCoverage: return "MalformedCoverage";
    case Errc::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace vplat
