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

#ifndef RANKDESIGN_QUADRATURE_HPP_
#define RANKDESIGN_QUADRATURE_HPP_

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "rankdesign/errors.hpp"

namespace rankdesign {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

struct QuadratureOptions {
  double rel_tol = 1e-8;
  double abs_floor = 1e-15;
  int max_depth = 20;
};

namespace detail {

template <class F>
struct SimpsonState {
  const F& f;
  int max_depth;
  double floor;
  bool failed = false;
  double error = 0.0;

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                 int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) {
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    if (depth >= max_depth) {
      failed = true;
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    return recurse(a, m, fa, flm, fm, left, std::max(0.5 * tol, floor), depth + 1) +
           recurse(m, b, fm, frm, fb, right, std::max(0.5 * tol, floor), depth + 1);
  }
};

}  // namespace detail

// Adaptive Simpson on [a, b]. The absolute target is rel_tol times a coarse
// estimate of the integral of |f|. It halves per level down to 1/1024 of
// that target, which lets endpoint singularities settle within max_depth. Throws QuadratureError (carrying the partial estimate) if any
// branch is still unresolved at max_depth.
template <class F>
QuadratureResult adaptive_simpson(const F& f, double a, double b, const QuadratureOptions& opt = {}) {
  if (!(b > a)) return {};
  constexpr int kCoarse = 16;
  double scale = 0.0;
  const double step = (b - a) / kCoarse;
  for (int i = 0; i <= kCoarse; ++i) {
    const double w = (i == 0 || i == kCoarse) ? 0.5 : 1.0;
    scale += w * std::abs(f(a + i * step));
  }
  scale *= step;
  const double tol = std::max(opt.rel_tol * scale, opt.abs_floor);

  detail::SimpsonState<F> state{f, opt.max_depth, tol / 1024.0};
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double value = state.recurse(a, b, fa, fm, fb, whole, tol, 0);
  if (state.failed) {
    throw QuadratureError("adaptive Simpson did not converge within " +
                              std::to_string(opt.max_depth) + " refinement levels",
                          value);
  }
  return {value, state.error};
}

// Integrates over [nodes.front(), nodes.back()] treating every node as a
// forced split point (kinks, band edges). Nodes need not be unique.
template <class F>
QuadratureResult integrate_piecewise(const F& f, std::span<const double> nodes,
                                     const QuadratureOptions& opt = {}) {
  std::vector<double> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  QuadratureResult total;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (!(sorted[i] > sorted[i - 1])) continue;
    try {
      const auto piece = adaptive_simpson(f, sorted[i - 1], sorted[i], opt);
      total.value += piece.value;
      total.error_estimate += piece.error_estimate;
    } catch (const QuadratureError& e) {
      throw QuadratureError(e.what(), total.value + e.partial_estimate());
    }
  }
  return total;
}

}  // namespace rankdesign

#endif  // RANKDESIGN_QUADRATURE_HPP_
