/* Copyright 2026 The Fluency Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef FLUENCY_LABEL_H_
#define FLUENCY_LABEL_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace fluency {

// Class order is fixed everywhere: rows/columns of confusion matrices,
// classifier outputs and probability vectors.
enum class FluencyClass : int { kLow = 0, kIntermediate = 1, kHigh = 2 };

inline constexpr int kNumClasses = 3;
inline constexpr std::array<FluencyClass, kNumClasses> kAllClasses = {
    FluencyClass::kLow, FluencyClass::kIntermediate, FluencyClass::kHigh};

constexpr int ClassIndex(FluencyClass c) { return static_cast<int>(c); }
FluencyClass ClassFromIndex(int index);

// Lower-case name: "low", "intermediate", "high".
std::string_view ClassName(FluencyClass c);

// Case-insensitive; nullopt for unknown tokens.
std::optional<FluencyClass> ParseClass(std::string_view token);

// Rubric sublevels 0..5 map to classes in pairs: {0,1} low, {2,3}
// intermediate, {4,5} high.
FluencyClass ClassOfSublevel(int sublevel);

struct FluencyLabel {
  FluencyClass cls = FluencyClass::kLow;
  std::optional<int> sublevel;

  // Throws std::invalid_argument when the sublevel is outside 0..5 or
  // belongs to a different class.
  static FluencyLabel Make(FluencyClass cls, std::optional<int> sublevel);

  friend bool operator==(const FluencyLabel&, const FluencyLabel&) = default;
};

}  // namespace fluency

#endif  // FLUENCY_LABEL_H_
