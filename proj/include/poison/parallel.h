// Copyright 2026 The Poison Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POISON_PARALLEL_H_
#define POISON_PARALLEL_H_

#include <cstdint>
#include <exception>
#include <utility>

#include <omp.h>

namespace poison {

// Every data-parallel loop in the library has a serial twin selected by this
// flag. Results never depend on the choice: work items write to their own
// slots and draw from their own random streams.
enum class Execution { kSerial, kParallel };

// Calls fn(i) for i in [0, n). The first exception thrown by any item is
// rethrown after the loop finishes. workers <= 0 means the OpenMP default.
template <typename Fn>
void ForEachIndex(int64_t n, Execution exec, Fn&& fn, int workers = 0) {
  if (exec == Execution::kSerial || n < 2) {
    for (int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int64_t i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(poison_for_each_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace poison

#endif  // POISON_PARALLEL_H_
