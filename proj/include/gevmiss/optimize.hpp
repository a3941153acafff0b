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

#include <array>
#include <cstddef>
#include <functional>

namespace gevmiss {

// Derivative-free Nelder-Mead minimizer on a fixed-dimension vector.
template <std::size_t Dim>
struct NelderMeadResult {
  std::array<double, Dim> x{};
  double value = 0.0;
  int iterations = 0;
  bool converged = false;  // objective spread fell below tolerance
};

struct NelderMeadOptions {
  int max_iterations = 2000;
  double f_tolerance = 1e-10;  // stop when max f - min f over the simplex drops below
};

template <std::size_t Dim>
NelderMeadResult<Dim> nelder_mead(const std::function<double(const std::array<double, Dim>&)>& f,
                                  const std::array<double, Dim>& start,
                                  const std::array<double, Dim>& step,
                                  const NelderMeadOptions& options = {});

extern template NelderMeadResult<2> nelder_mead<2>(
    const std::function<double(const std::array<double, 2>&)>&, const std::array<double, 2>&,
    const std::array<double, 2>&, const NelderMeadOptions&);
extern template NelderMeadResult<3> nelder_mead<3>(
    const std::function<double(const std::array<double, 3>&)>&, const std::array<double, 3>&,
    const std::array<double, 3>&, const NelderMeadOptions&);

}  // namespace gevmiss
