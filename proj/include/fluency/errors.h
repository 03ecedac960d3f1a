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

#ifndef FLUENCY_ERRORS_H_
#define FLUENCY_ERRORS_H_

#include <stdexcept>
#include <string>

namespace fluency {

// Root of every error the library throws. Subclasses name the stage that
// failed; the CLI maps all of them to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FLUENCY_DEFINE_ERROR(Name)      \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  }

FLUENCY_DEFINE_ERROR(DecodeError);
FLUENCY_DEFINE_ERROR(UnsupportedFormat);
FLUENCY_DEFINE_ERROR(ManifestError);
FLUENCY_DEFINE_ERROR(DatasetError);
FLUENCY_DEFINE_ERROR(ConfigError);
FLUENCY_DEFINE_ERROR(ExtractionError);
FLUENCY_DEFINE_ERROR(TrainError);
FLUENCY_DEFINE_ERROR(PredictError);
FLUENCY_DEFINE_ERROR(EvalError);
FLUENCY_DEFINE_ERROR(CorpusError);
FLUENCY_DEFINE_ERROR(ModelFormatError);

#undef FLUENCY_DEFINE_ERROR

}  // namespace fluency

#endif  // FLUENCY_ERRORS_H_
