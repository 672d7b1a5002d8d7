/*
 * Copyright 2026 The rankdesign Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RANKDESIGN_GOLDEN_SECTION_HPP_
#define RANKDESIGN_GOLDEN_SECTION_HPP_

#include <cmath>

namespace rankdesign {

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
};

// Golden-section maximisation of a unimodal f on [a, b], stopping once the
// bracket is no wider than x_tol.
template <class F>
ScalarOptimum golden_section_maximize(const F& f, double a, double b, double x_tol = 1e-6,
                                      int max_iterations = 500) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int it = 0;
  for (; it < max_iterations && (b - a) > x_tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x), it};
}

}  // namespace rankdesign

#endif  // RANKDESIGN_GOLDEN_SECTION_HPP_
