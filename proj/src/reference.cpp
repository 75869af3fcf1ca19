#include "numerovlab/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "numerovlab/csv.hpp"
#include "numerovlab/errors.hpp"

namespace nlab {

namespace {

// 16-point Gauss-Legendre rule on [-1, 1] (positive half; the rule is
// symmetric).
constexpr int kGaussHalf = 8;
constexpr double kGaussNode[kGaussHalf] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr double kGaussWeight[kGaussHalf] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

} // namespace

SineSeries::SineSeries(std::vector<double> coefficients, double a, double X)
    : coefficients_(std::move(coefficients)), a_(a), length_(X) {
  if (coefficients_.empty()) throw std::invalid_argument("sine series needs at least one mode");
  if (!(a_ > 0.0) || !(length_ > 0.0))
    throw std::invalid_argument("sine series needs positive speed and length");
}

double SineSeries::evaluate(double x, double t) const {
  const double wx = std::numbers::pi / length_;
  const double wt = std::numbers::pi * a_ / length_;
  double acc = 0.0;
  for (std::size_t n = 1; n <= coefficients_.size(); ++n)
    acc += coefficients_[n - 1] * std::cos(n * wt * t) * std::sin(n * wx * x);
  return acc;
}

std::vector<double> SineSeries::evaluate(std::span<const double> xs, double t) const {
  std::vector<double> out(xs.size());
  std::transform(xs.begin(), xs.end(), out.begin(),
                 [&](double x) { return evaluate(x, t); });
  return out;
}

SineSeries::Energy SineSeries::energy(double t) const {
  // u_x = sum b_n (n pi / X) cos(...) cos(...),  u_t = -sum b_n (n pi a / X) sin(...) sin(...);
  // with int_0^X cos^2 = int_0^X sin^2 = X/2 over the basis.
  Energy e;
  const double wt = std::numbers::pi * a_ / length_;
  for (std::size_t n = 1; n <= coefficients_.size(); ++n) {
    const double k = n * std::numbers::pi / length_;
    const double b2 = coefficients_[n - 1] * coefficients_[n - 1];
    const double c = std::cos(n * wt * t), s = std::sin(n * wt * t);
    e.potential += a_ * a_ * b2 * k * k * c * c * (length_ / 2.0);
    e.kinetic += b2 * k * k * a_ * a_ * s * s * (length_ / 2.0);
  }
  return e;
}

double SineSeries::tail_magnitude() const {
  const std::size_t n = coefficients_.size();
  const std::size_t start = n - std::max<std::size_t>(1, n / 10);
  double tail = 0.0;
  for (std::size_t i = start; i < n; ++i) tail = std::max(tail, std::abs(coefficients_[i]));
  return tail;
}

SineSeries project_sine_series(const std::function<double(double)>& u0, double a, double X,
                               const ProjectionOptions& options) {
  if (options.modes < 1 || options.cells < 1 || options.points_per_cell != 16)
    throw std::invalid_argument("projection: need modes >= 1, cells >= 1, 16 points per cell");
  if (!(X > 0.0)) throw std::invalid_argument("projection: length must be positive");

  // Precompute all quadrature points/weights on [0, X].
  const int total = options.cells * options.points_per_cell;
  std::vector<double> xs(total), ws(total), fs(total);
  const double dx = X / options.cells;
  int idx = 0;
  for (int c = 0; c < options.cells; ++c) {
    const double mid = (c + 0.5) * dx, half = 0.5 * dx;
    for (int g = 0; g < kGaussHalf; ++g) {
      xs[idx] = mid - half * kGaussNode[g];
      ws[idx] = half * kGaussWeight[g];
      ++idx;
      xs[idx] = mid + half * kGaussNode[g];
      ws[idx] = half * kGaussWeight[g];
      ++idx;
    }
  }
  for (int i = 0; i < total; ++i) fs[i] = u0(xs[i]);

  std::vector<double> coeffs(options.modes);
  const double w = std::numbers::pi / X;
  for (int n = 1; n <= options.modes; ++n) {
    double acc = 0.0;
    for (int i = 0; i < total; ++i) acc += ws[i] * fs[i] * std::sin(n * w * xs[i]);
    coeffs[n - 1] = 2.0 / X * acc;
  }

  SineSeries series(std::move(coeffs), a, X);

  double worst = 0.0;
  for (int s = 0; s < options.check_samples; ++s) {
    const double x = X * (s + 0.5) / options.check_samples;
    worst = std::max(worst, std::abs(series.evaluate(x, 0.0) - u0(x)));
  }
  if (worst > options.check_tolerance)
    throw numerical_error("sine projection self-test residual " + format_double(worst) +
                          " exceeds tolerance " + format_double(options.check_tolerance) +
                          " (modes=" + std::to_string(options.modes) +
                          ", points=" + std::to_string(total) + ")");
  return series;
}

double reflected_point_value(const std::function<double(double)>& u0, double a, double X,
                             double x, double t) {
  const auto odd_periodic = [&](double y) {
    const double period = 2.0 * X;
    double r = y - period * std::floor(y / period);  // r in [0, 2X)
    return (r <= X) ? u0(r) : -u0(period - r);
  };
  return 0.5 * (odd_periodic(x - a * t) + odd_periodic(x + a * t));
}

double quartic_bump(double x) {
  const double y = 10.0 * (x - 0.5);
  const double y2 = y * y;
  return std::exp(-y2 * y2);
}

} // namespace nlab
