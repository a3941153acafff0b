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

#include "gevmiss/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gevmiss {

template <std::size_t Dim>
NelderMeadResult<Dim> nelder_mead(const std::function<double(const std::array<double, Dim>&)>& f,
                                  const std::array<double, Dim>& start,
                                  const std::array<double, Dim>& step,
                                  const NelderMeadOptions& options) {
  using Point = std::array<double, Dim>;
  constexpr std::size_t kVertices = Dim + 1;
  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  // NaN objective values sort as worst.
  auto eval = [&](const Point& p) {
    const double v = f(p);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::array<Point, kVertices> simplex;
  std::array<double, kVertices> values;
  simplex[0] = start;
  for (std::size_t i = 0; i < Dim; ++i) {
    simplex[i + 1] = start;
    simplex[i + 1][i] += step[i];
  }
  for (std::size_t i = 0; i < kVertices; ++i) values[i] = eval(simplex[i]);

  std::array<std::size_t, kVertices> order;
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::array<Point, kVertices> s2;
    std::array<double, kVertices> v2;
    for (std::size_t i = 0; i < kVertices; ++i) {
      s2[i] = simplex[order[i]];
      v2[i] = values[order[i]];
    }
    simplex = s2;
    values = v2;
  };

  auto along = [](const Point& from, const Point& to, double t) {
    Point p;
    for (std::size_t i = 0; i < Dim; ++i) p[i] = from[i] + t * (to[i] - from[i]);
    return p;
  };

  NelderMeadResult<Dim> result;
  int iter = 0;
  sort_simplex();
  while (true) {
    const double spread = values[Dim] - values[0];
    if (std::isfinite(spread) && spread < options.f_tolerance) {
      result.converged = true;
      break;
    }
    if (iter >= options.max_iterations) break;
    ++iter;

    Point centroid{};
    for (std::size_t v = 0; v < Dim; ++v) {
      for (std::size_t i = 0; i < Dim; ++i) centroid[i] += simplex[v][i] / static_cast<double>(Dim);
    }
    const Point& worst = simplex[Dim];

    const Point reflected = along(centroid, worst, -kReflect);
    const double fr = eval(reflected);
    if (fr < values[0]) {
      const Point expanded = along(centroid, worst, -kExpand);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[Dim] = expanded;
        values[Dim] = fe;
      } else {
        simplex[Dim] = reflected;
        values[Dim] = fr;
      }
    } else if (fr < values[Dim - 1]) {
      simplex[Dim] = reflected;
      values[Dim] = fr;
    } else {
      bool accepted = false;
      if (fr < values[Dim]) {
        const Point outside = along(centroid, worst, -kContract * kReflect);
        const double fo = eval(outside);
        if (fo <= fr) {
          simplex[Dim] = outside;
          values[Dim] = fo;
          accepted = true;
        }
      } else {
        const Point inside = along(centroid, worst, kContract);
        const double fi = eval(inside);
        if (fi < values[Dim]) {
          simplex[Dim] = inside;
          values[Dim] = fi;
          accepted = true;
        }
      }
      if (!accepted) {
        for (std::size_t v = 1; v < kVertices; ++v) {
          simplex[v] = along(simplex[0], simplex[v], kShrink);
          values[v] = eval(simplex[v]);
        }
      }
    }
    sort_simplex();
  }

  result.x = simplex[0];
  result.value = values[0];
  result.iterations = iter;
  return result;
}

template NelderMeadResult<2> nelder_mead<2>(const std::function<double(const std::array<double, 2>&)>&,
                                            const std::array<double, 2>&,
                                            const std::array<double, 2>&, const NelderMeadOptions&);
template NelderMeadResult<3> nelder_mead<3>(const std::function<double(const std::array<double, 3>&)>&,
                                            const std::array<double, 3>&,
                                            const std::array<double, 3>&, const NelderMeadOptions&);

}  // namespace gevmiss
