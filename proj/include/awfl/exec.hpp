// Copyright 2026 The awfl Authors.
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

#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace awfl {

// Selects between the OpenMP kernels and a plain single-threaded loop.
// Both produce bit-identical results: parallel loops only ever split work
// over independent items (clients, rounds, fixed sample blocks) and partial
// results are combined in a fixed order.
enum class Exec { serial, parallel };

// Number of OpenMP threads that a parallel region would use.
int available_threads() noexcept;

// Runs body(i) for i in [0, n), on OpenMP threads when exec is parallel.
// The first exception thrown by any index (lowest index wins) is rethrown
// after the loop.
template <class Body>
void for_each_index(int n, Exec exec, Body&& body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n > 0 ? n : 0));
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& error : errors)
    if (error) std::rethrow_exception(error);
}

}  // namespace awfl
