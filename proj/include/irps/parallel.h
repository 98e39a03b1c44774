// Copyright 2026 The IRPS Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IRPS_PARALLEL_H_
#define IRPS_PARALLEL_H_

#include <functional>

namespace irps {

// Worker count used when a caller passes jobs <= 0: hardware concurrency.
int DefaultJobs();

// Runs fn(0..n-1) on up to `jobs` threads. Results must be written to
// per-index slots by the caller so that output order never depends on
// scheduling. If any call throws, the exception from the lowest index is
// rethrown after all workers finish.
void ParallelFor(int n, int jobs, const std::function<void(int)>& fn);

}  // namespace irps

#endif  // IRPS_PARALLEL_H_
