#pragma once

/**
 * @file microscope.hpp
 * @brief Magnified graph windows and the local-straightness metric.
 *
 * A frame samples f on [c - w, c + w] and rescales it to the normalized
 * window t ∈ [-1, 1], y = (f(c + t·w) - f(c)) / w: the finite-scale view of
 * the map x ↦ (x - c)/ε. A differentiable function's frames tend to a line
 * as w shrinks; the blancmange function's never do.
 */

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "infinitesimal/expr.hpp"

namespace infinitesimal {

inline constexpr int kDefaultBlancmangeDepth = 40;

/// Σ_{n<depth} 2^-n · s(2^n x), s(u) the distance from u to the nearest
/// integer. Periodic with period 1.
double blancmange(double x, int depth = kDefaultBlancmangeDepth);

struct FramePoint {
  double t = 0.0;
  double y = 0.0;
};

struct Frame {
  double center = 0.0;
  double halfwidth = 0.0;
  std::vector<FramePoint> points;
  std::string label;

  /// The line through the first and last samples.
  double chord(double t) const;
};

using RealFunction = std::function<double(double)>;

/// Uniform samples t_i = (2i - (n-1)) / (n-1); for odd n the middle sample
/// is t = 0 with y = 0 exactly.
Frame frame(const RealFunction& f, double center, double halfwidth, int n_points,
            std::string label = {});
Frame frame(const Expr& f, double center, double halfwidth, int n_points);

/// max |y(t) - chord(t)| in normalized coordinates.
double straightness(const Frame& fr);

}  // namespace infinitesimal
