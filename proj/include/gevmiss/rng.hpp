// Copyright 2026 The gevmiss Authors
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace gevmiss {

using Rng = std::mt19937_64;

// Independent stream for (seed, stream index). The result depends only on the
// pair, never on the order in which streams are created.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

std::uint64_t splitmix64(std::uint64_t x);

// Worker count from GEVMISS_THREADS, else the hardware concurrency.
unsigned default_thread_count();

// Calls body(i) for i in [0, count) on up to `threads` workers. Each index is
// visited exactly once; callers write results into per-index slots.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace gevmiss
