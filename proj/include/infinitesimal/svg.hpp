#pragma once

// Deterministic SVG rendering of frames and point clouds, and the canned
// figures exposed by the `figure` command.

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "infinitesimal/microscope.hpp"

namespace infinitesimal {

inline constexpr int kCanvasWidth = 800;
inline constexpr int kCanvasHeight = 600;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Polyline {
  std::vector<Point2> points;
  std::string label;
};

struct PointCloud {
  std::vector<Point2> points;
  std::string label;
};

using SvgLayer = std::variant<Polyline, PointCloud>;

struct SvgStyle {
  std::string title;
  double stroke_width = 1.0;
  double dot_radius = 2.0;
  bool axes = true;
};

/// Fixed 800×600 canvas; numbers carry exactly 3 decimals. Throws
/// InvalidArgument when there is nothing to draw.
std::string render_svg(std::span<const SvgLayer> layers, const SvgStyle& style);

/// Frames are drawn as polylines in their normalized (t, y) coordinates.
std::string render_svg(std::span<const Frame> frames, const SvgStyle& style);

/// Parameters recorded in a figure's JSON sidecar.
struct FigureSpec {
  std::string name;
  std::string function;
  double center = 0.0;
  double halfwidth = 0.0;
  int n_points = 0;
  int depth = 0;
};

struct Figure {
  FigureSpec spec;
  std::string svg;
};

/// Curve of sin(1/x) on ±[10^-3, 0.5].
Figure figure_sin_reciprocal(int n_points = 4000);

/// Dots (1/n, sin n) for n in [first, last], over the curve sin(1/x).
Figure figure_sequence_dots(int first, int last);

struct MicroscopeParams {
  std::string function = "blancmange(x)";
  double center = 1.0 / 3.0;
  double halfwidth = 0.25;
  int levels = 5;
  int n_points = 257;
};

/// Overlaid normalized frames at halfwidths w, w/2, ..., w/2^(levels-1).
Figure figure_microscope(const MicroscopeParams& params);

/// Names accepted by make_figure: fig5, fig7a, fig7b, microscope.
Figure make_figure(std::string_view name, const MicroscopeParams& params = {});

}  // namespace infinitesimal
