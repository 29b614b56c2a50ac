#include "infinitesimal/microscope.hpp"

#include <cmath>

#include "infinitesimal/errors.hpp"

namespace infinitesimal {

double blancmange(double x, int depth) {
  if (depth < 1) throw MathError(ErrorCode::InvalidArgument, "blancmange depth must be >= 1");
  double sum = 0.0;
  double scale = 1.0;
  double u = x;
  for (int n = 0; n < depth; ++n) {
    sum += scale * std::abs(u - std::floor(u + 0.5));
    u *= 2.0;
    scale *= 0.5;
  }
  return sum;
}

double Frame::chord(double t) const {
  const FramePoint& a = points.front();
  const FramePoint& b = points.back();
  return a.y + (t - a.t) * (b.y - a.y) / (b.t - a.t);
}

Frame frame(const RealFunction& f, double center, double halfwidth, int n_points,
            std::string label) {
  if (!(halfwidth > 0.0) || !std::isfinite(halfwidth)) {
    throw MathError(ErrorCode::InvalidArgument, "frame halfwidth must be positive");
  }
  if (n_points < 3) throw MathError(ErrorCode::InvalidArgument, "frame needs at least 3 points");

  Frame fr;
  fr.center = center;
  fr.halfwidth = halfwidth;
  fr.label = std::move(label);
  fr.points.reserve(static_cast<std::size_t>(n_points));
  const double base = f(center);
  const double denominator = n_points - 1;
  for (int i = 0; i < n_points; ++i) {
    const double t = (2.0 * i - denominator) / denominator;
    double value = 0.0;
    try {
      value = f(center + t * halfwidth);
    } catch (const MathError& err) {
      throw MathError(err.code(), "frame sample at t = " + format_real(t) + ": " + err.what());
    }
    fr.points.push_back({t, (value - base) / halfwidth});
  }
  return fr;
}

Frame frame(const Expr& f, double center, double halfwidth, int n_points) {
  const std::string var = sole_variable(f);
  return frame([&](double x) { return eval_real(f, var, x); }, center, halfwidth, n_points,
               print(f));
}

double straightness(const Frame& fr) {
  double worst = 0.0;
  for (const auto& p : fr.points) worst = std::max(worst, std::abs(p.y - fr.chord(p.t)));
  return worst;
}

}  // namespace infinitesimal
