#include "infinitesimal/svg.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "infinitesimal/errors.hpp"

namespace infinitesimal {

namespace {

constexpr double kMargin = 50.0;
constexpr std::array<std::string_view, 6> kPalette{"#1f4e79", "#c0392b", "#27ae60",
                                                   "#8e44ad", "#d35400", "#2c3e50"};

std::string fixed3(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v + 0.0,
                                 std::chars_format::fixed, 3);
  std::string s(buf.data(), end);
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Bounds {
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -std::numeric_limits<double>::infinity();
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -std::numeric_limits<double>::infinity();

  void include(const Point2& p) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }

  void widen() {
    if (xmax - xmin <= 0.0) {
      xmin -= 1.0;
      xmax += 1.0;
    }
    if (ymax - ymin <= 0.0) {
      ymin -= 1.0;
      ymax += 1.0;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
  }

  double px(double x) const { return kMargin + (x - xmin) / (xmax - xmin) * (kCanvasWidth - 2 * kMargin); }
  double py(double y) const {
    return kCanvasHeight - kMargin - (y - ymin) / (ymax - ymin) * (kCanvasHeight - 2 * kMargin);
  }
};

const std::vector<Point2>& points_of(const SvgLayer& layer) {
  return std::visit([](const auto& l) -> const std::vector<Point2>& { return l.points; }, layer);
}

}  // namespace

std::string render_svg(std::span<const SvgLayer> layers, const SvgStyle& style) {
  Bounds bounds;
  std::size_t total = 0;
  for (const auto& layer : layers) {
    for (const auto& p : points_of(layer)) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw MathError(ErrorCode::InvalidArgument, "cannot render a non-finite point");
      }
      bounds.include(p);
      ++total;
    }
  }
  if (total == 0) throw MathError(ErrorCode::InvalidArgument, "nothing to render");
  bounds.widen();

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";
  if (!style.title.empty()) {
    out += "<text x=\"400.000\" y=\"30.000\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">" + escape(style.title) + "</text>\n";
  }
  if (style.axes) {
    const auto axis = [&](double x1, double y1, double x2, double y2) {
      out += "<line x1=\"" + fixed3(x1) + "\" y1=\"" + fixed3(y1) + "\" x2=\"" + fixed3(x2) +
             "\" y2=\"" + fixed3(y2) + "\" stroke=\"#999999\" stroke-width=\"0.500\"/>\n";
    };
    if (bounds.ymin <= 0.0 && bounds.ymax >= 0.0) {
      axis(kMargin, bounds.py(0.0), kCanvasWidth - kMargin, bounds.py(0.0));
    }
    if (bounds.xmin <= 0.0 && bounds.xmax >= 0.0) {
      axis(bounds.px(0.0), kMargin, bounds.px(0.0), kCanvasHeight - kMargin);
    }
  }

  std::size_t index = 0;
  for (const auto& layer : layers) {
    const std::string color(kPalette[index++ % kPalette.size()]);
    if (const auto* line = std::get_if<Polyline>(&layer)) {
      out += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
             fixed3(style.stroke_width) + "\" points=\"";
      for (std::size_t i = 0; i < line->points.size(); ++i) {
        if (i > 0) out += ' ';
        out += fixed3(bounds.px(line->points[i].x)) + "," + fixed3(bounds.py(line->points[i].y));
      }
      out += "\"/>\n";
    } else {
      const auto& cloud = std::get<PointCloud>(layer);
      out += "<g fill=\"" + color + "\">\n";
      for (const auto& p : cloud.points) {
        out += "<circle cx=\"" + fixed3(bounds.px(p.x)) + "\" cy=\"" + fixed3(bounds.py(p.y)) +
               "\" r=\"" + fixed3(style.dot_radius) + "\"/>\n";
      }
      out += "</g>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

std::string render_svg(std::span<const Frame> frames, const SvgStyle& style) {
  std::vector<SvgLayer> layers;
  for (const auto& fr : frames) {
    Polyline line;
    line.label = fr.label;
    for (const auto& p : fr.points) line.points.push_back({p.t, p.y});
    layers.emplace_back(std::move(line));
  }
  return render_svg(layers, style);
}

namespace {

// Sampled uniformly in u = 1/x so every oscillation gets the same resolution.
Polyline sin_reciprocal_branch(double sign, double inner, double outer, int n_points) {
  Polyline line;
  const double u_lo = 1.0 / outer;
  const double u_hi = 1.0 / inner;
  for (int i = 0; i < n_points; ++i) {
    const double u = u_lo + (u_hi - u_lo) * i / (n_points - 1);
    const double x = sign / u;
    line.points.push_back({x, std::sin(1.0 / x)});
  }
  return line;
}

}  // namespace

Figure figure_sin_reciprocal(int n_points) {
  if (n_points < 2) throw MathError(ErrorCode::InvalidArgument, "fig5 needs at least 2 points");
  std::vector<SvgLayer> layers;
  layers.emplace_back(sin_reciprocal_branch(-1.0, 1e-3, 0.5, n_points));
  layers.emplace_back(sin_reciprocal_branch(1.0, 1e-3, 0.5, n_points));
  SvgStyle style;
  style.title = "sin(1/x)";
  style.stroke_width = 0.5;
  return {{"fig5", "sin(1/x)", 0.0, 0.5, n_points, 0}, render_svg(layers, style)};
}

Figure figure_sequence_dots(int first, int last) {
  if (first < 1 || last < first) {
    throw MathError(ErrorCode::InvalidArgument, "sequence figure needs 1 <= first <= last");
  }
  std::vector<SvgLayer> layers;
  const double x_min = 1.0 / last;
  const double x_max = 1.0 / first;
  Polyline curve = sin_reciprocal_branch(1.0, x_min, x_max, 2000);
  layers.emplace_back(std::move(curve));
  PointCloud dots;
  for (int n = first; n <= last; ++n) dots.points.push_back({1.0 / n, std::sin(static_cast<double>(n))});
  layers.emplace_back(std::move(dots));
  SvgStyle style;
  style.title = "a_n = sin(n) at x = 1/n, n = " + std::to_string(first) + ".." + std::to_string(last);
  style.stroke_width = 0.5;
  style.dot_radius = first >= 100 ? 1.0 : 3.0;
  const std::string name = first >= 100 ? "fig7b" : "fig7a";
  return {{name, "sin(1/x)", 0.0, x_max, last - first + 1, 0}, render_svg(layers, style)};
}

Figure figure_microscope(const MicroscopeParams& params) {
  if (params.levels < 1) throw MathError(ErrorCode::InvalidArgument, "microscope needs levels >= 1");
  const Expr f = parse(params.function);
  std::vector<Frame> frames;
  double w = params.halfwidth;
  for (int level = 0; level < params.levels; ++level, w /= 2.0) {
    frames.push_back(frame(f, params.center, w, params.n_points));
  }
  SvgStyle style;
  style.title = params.function + " magnified at " + format_real(params.center);
  const std::string svg = render_svg(std::span<const Frame>(frames), style);
  return {{"microscope", params.function, params.center, params.halfwidth, params.n_points,
           kDefaultBlancmangeDepth},
          svg};
}

Figure make_figure(std::string_view name, const MicroscopeParams& params) {
  if (name == "fig5") return figure_sin_reciprocal();
  if (name == "fig7a") return figure_sequence_dots(1, 20);
  if (name == "fig7b") return figure_sequence_dots(100, 1000);
  if (name == "microscope") return figure_microscope(params);
  throw MathError(ErrorCode::InvalidArgument, "unknown figure '" + std::string(name) + "'");
}

}  // namespace infinitesimal
