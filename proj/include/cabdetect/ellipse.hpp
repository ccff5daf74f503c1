#pragma once

#include <array>
#include <stdexcept>
#include <utility>

namespace cabdetect {

struct DegenerateConfiguration : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotAnEllipse : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Conic a*x^2 + 2h*xy + b*y^2 + 2g*x + 2f*y + 1 = 0.
struct ConicCoeffs {
  double a = 0.0;
  double h = 0.0;
  double b = 0.0;
  double g = 0.0;
  double f = 0.0;

  double residual(double x, double y) const;
};

/// Geometric ellipse: center, semi-axes (r_max >= r_min > 0), orientation of
/// the major axis in [-pi/2, pi/2).
struct EllipseParams {
  double x0 = 0.0;
  double y0 = 0.0;
  double r_max = 0.0;
  double r_min = 0.0;
  double theta = 0.0;
};

using Point2 = std::pair<double, double>;

/// Solves the 5x5 linear system through five points. Throws
/// DegenerateConfiguration when the system is singular or the constant term
/// cannot be normalized to 1.
ConicCoeffs fit_conic_five_points(const std::array<Point2, 5>& pts);

/// Decodes center, semi-axes and orientation. Throws NotAnEllipse when the
/// conic is not a real ellipse.
EllipseParams conic_to_ellipse(const ConicCoeffs& c);

/// Parametric point: center + R(theta) * (r_max*cos t, r_min*sin t).
Point2 point_on_ellipse(const EllipseParams& e, double t);

}  // namespace cabdetect
