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

#include "fluency/label.h"

#include <cctype>
#include <stdexcept>

namespace fluency {

FluencyClass ClassFromIndex(int index) {
  if (index < 0 || index >= kNumClasses) {
    throw std::out_of_range("class index out of range: " +
                            std::to_string(index));
  }
  return static_cast<FluencyClass>(index);
}

std::string_view ClassName(FluencyClass c) {
  switch (c) {
    case FluencyClass::kLow:
      return "low";
    case FluencyClass::kIntermediate:
      return "intermediate";
    case FluencyClass::kHigh:
      return "high";
  }
  return "?";
}

std::optional<FluencyClass> ParseClass(std::string_view token) {
  std::string lower;
  for (char c : token) {
    lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  for (FluencyClass c : kAllClasses) {
    if (lower == ClassName(c)) return c;
  }
  return std::nullopt;
}

FluencyClass ClassOfSublevel(int sublevel) {
  if (sublevel < 0 || sublevel > 5) {
    throw std::invalid_argument("sublevel must be in 0..5, got " +
                                std::to_string(sublevel));
  }
  return ClassFromIndex(sublevel / 2);
}

FluencyLabel FluencyLabel::Make(FluencyClass cls, std::optional<int> sublevel) {
  if (sublevel && ClassOfSublevel(*sublevel) != cls) {
    throw std::invalid_argument(
        "sublevel " + std::to_string(*sublevel) + " is not in class '" +
        std::string(ClassName(cls)) + "'");
  }
  return FluencyLabel{cls, sublevel};
}

}  // namespace fluency
