// Copyright 2026 lindfit contributors
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

#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lindfit {

// Serial is the reference path: a plain loop in task order. Parallel runs the
// same task bodies under OpenMP; callers write results into per-task slots and
// reduce serially afterwards, so both modes produce identical bytes.
enum class ExecMode { Parallel, Serial };

// OpenMP thread budget, capped by the LINDFIT_THREADS environment variable.
int effective_threads();

template <class Fn>
void parallel_for(int n, ExecMode mode, Fn&& fn) {
  // Task bodies must not throw; record failures per slot instead.
  if (mode == ExecMode::Serial || effective_threads() <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(effective_threads())
#endif
  for (int i = 0; i < n; ++i) fn(i);
}

}  // namespace lindfit
