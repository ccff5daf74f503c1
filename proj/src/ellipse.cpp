#include "cabdetect/ellipse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cabdetect {

namespace {

constexpr double kPivotRel = 1e-12;
constexpr double kCircleRel = 1e-9;

// Gaussian elimination with partial pivoting on an n x (n+1) augmented matrix.
// Returns false when a pivot falls below tol.
template <int N>
bool solve_augmented(double m[N][N + 1], double tol) {
  for (int col = 0; col < N; ++col) {
    int pivot = col;
    for (int r = col + 1; r < N; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    }
    if (std::abs(m[pivot][col]) < tol) return false;
    if (pivot != col) std::swap(m[pivot], m[col]);
    for (int r = col + 1; r < N; ++r) {
      double factor = m[r][col] / m[col][col];
      for (int c = col; c <= N; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  for (int col = N - 1; col >= 0; --col) {
    double acc = m[col][N];
    for (int c = col + 1; c < N; ++c) acc -= m[col][c] * m[c][N];
    m[col][N] = acc / m[col][col];
  }
  return true;
}

double normalize_half_pi(double theta) {
  const double pi = std::numbers::pi;
  theta = std::fmod(theta + pi / 2, pi);
  if (theta < 0) theta += pi;
  return theta - pi / 2;
}

}  // namespace

double ConicCoeffs::residual(double x, double y) const {
  return a * x * x + 2 * h * x * y + b * y * y + 2 * g * x + 2 * f * y + 1.0;
}

ConicCoeffs fit_conic_five_points(const std::array<Point2, 5>& pts) {
  // Fit in centroid-centered, scale-normalized coordinates and map the
  // coefficients back; the raw system is badly conditioned at pixel scale.
  double cx = 0.0, cy = 0.0;
  for (const auto& [x, y] : pts) {
    cx += x;
    cy += y;
  }
  cx /= 5.0;
  cy /= 5.0;
  double rms = 0.0;
  for (const auto& [x, y] : pts) {
    rms += (x - cx) * (x - cx) + (y - cy) * (y - cy);
  }
  double scale = std::sqrt(rms / 5.0);
  if (scale <= 0.0) {
    throw DegenerateConfiguration("fit_conic_five_points: coincident points");
  }

  double m[5][6];
  double max_row = 0.0;
  for (int i = 0; i < 5; ++i) {
    double x = (pts[i].first - cx) / scale;
    double y = (pts[i].second - cy) / scale;
    m[i][0] = x * x;
    m[i][1] = 2 * x * y;
    m[i][2] = y * y;
    m[i][3] = 2 * x;
    m[i][4] = 2 * y;
    m[i][5] = -1.0;
    for (int c = 0; c < 5; ++c) max_row = std::max(max_row, std::abs(m[i][c]));
  }
  if (!solve_augmented<5>(m, kPivotRel * std::max(max_row, 1.0))) {
    throw DegenerateConfiguration(
        "fit_conic_five_points: singular five-point system");
  }

  // Undo x' = (x - cx)/s, y' = (y - cy)/s.
  double an = m[0][5], hn = m[1][5], bn = m[2][5], gn = m[3][5], fn = m[4][5];
  double s2 = scale * scale;
  double a = an / s2;
  double h = hn / s2;
  double b = bn / s2;
  double g = gn / scale - a * cx - h * cy;
  double f = fn / scale - b * cy - h * cx;
  double k = an / s2 * cx * cx + 2 * hn / s2 * cx * cy + bn / s2 * cy * cy -
             2 * (gn / scale) * cx - 2 * (fn / scale) * cy + 1.0;
  double coeff_mag = std::max({std::abs(a), std::abs(h), std::abs(b),
                               std::abs(g), std::abs(f)});
  if (std::abs(k) < kPivotRel * std::max(coeff_mag, 1.0)) {
    throw DegenerateConfiguration(
        "fit_conic_five_points: constant term cannot be normalized");
  }
  return ConicCoeffs{a / k, h / k, b / k, g / k, f / k};
}

EllipseParams conic_to_ellipse(const ConicCoeffs& c) {
  double C = c.a * c.b - c.h * c.h;
  if (C <= 0.0) {
    throw NotAnEllipse("conic_to_ellipse: ab - h^2 <= 0");
  }
  double R = std::sqrt((c.a - c.b) * (c.a - c.b) + 4 * c.h * c.h);

  EllipseParams e;
  e.x0 = (c.h * c.f - c.b * c.g) / C;
  e.y0 = (c.g * c.h - c.a * c.f) / C;

  // det of [[a,h,g],[h,b,f],[g,f,1]]
  double delta = c.a * (c.b - c.f * c.f) - c.h * (c.h - c.f * c.g) +
                 c.g * (c.h * c.f - c.b * c.g);
  double rad_major = -2 * delta / (C * (c.a + c.b - R));  // semi-axis^2
  double rad_minor = -2 * delta / (C * (c.a + c.b + R));
  if (!(rad_major > 0.0) || !(rad_minor > 0.0)) {
    throw NotAnEllipse("conic_to_ellipse: non-positive radicand");
  }
  double r_a = std::sqrt(rad_major);
  double r_b = std::sqrt(rad_minor);

  // phi is the direction of the larger quadratic-form eigenvalue
  // (a+b+R)/2, whose radius is sqrt(-2*delta / (C*(a+b+R))) = r_b.
  double phi = 0.5 * std::atan2(2 * c.h, c.a - c.b);
  if (r_a >= r_b) {
    e.r_max = r_a;
    e.r_min = r_b;
    e.theta = normalize_half_pi(phi + std::numbers::pi / 2);
  } else {
    e.r_max = r_b;
    e.r_min = r_a;
    e.theta = normalize_half_pi(phi);
  }
  if (std::abs(e.r_max - e.r_min) < kCircleRel * e.r_max) {
    e.theta = 0.0;
  }
  return e;
}

Point2 point_on_ellipse(const EllipseParams& e, double t) {
  double u = e.r_max * std::cos(t);
  double v = e.r_min * std::sin(t);
  double ct = std::cos(e.theta);
  double st = std::sin(e.theta);
  return {e.x0 + ct * u - st * v, e.y0 + st * u + ct * v};
}

}  // namespace cabdetect
