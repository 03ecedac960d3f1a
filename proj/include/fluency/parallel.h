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

#ifndef FLUENCY_PARALLEL_H_
#define FLUENCY_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace fluency {

// Number of workers to use when the caller asks for "all": hardware
// concurrency, at least 1.
int DefaultJobs();

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Each index runs exactly
// once; callers write results into pre-sized slots so output order never
// depends on scheduling. The first exception thrown by any task is rethrown
// after all workers stop.
void ParallelFor(size_t n, int jobs, const std::function<void(size_t)>& fn);

}  // namespace fluency

#endif  // FLUENCY_PARALLEL_H_
