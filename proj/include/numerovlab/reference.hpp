#pragma once

#include <functional>
#include <span>
#include <vector>

namespace nlab {

/// Separated-variables solution of the continuum problem on [0, X] with
/// homogeneous Dirichlet ends, zero initial velocity, and initial profile
/// projected onto sine modes:
///   u(x, t) = sum_n b_n cos(n pi a t / X) sin(n pi x / X).
class SineSeries {
public:
  SineSeries(std::vector<double> coefficients, double a, double X);

  double evaluate(double x, double t) const;
  std::vector<double> evaluate(std::span<const double> xs, double t) const;

  const std::vector<double>& coefficients() const noexcept { return coefficients_; }
  double speed() const noexcept { return a_; }
  double length() const noexcept { return length_; }

  /// Continuum energy pieces a^2 ||u_x||^2 and ||u_t||^2 evaluated from the
  /// series; their sum is time-independent.
  struct Energy {
    double potential = 0.0;
    double kinetic = 0.0;
    double total() const { return potential + kinetic; }
  };
  Energy energy(double t) const;

  /// Largest |b_n| over the last tenth of the modes — a cheap truncation
  /// monitor for smooth data.
  double tail_magnitude() const;

private:
  std::vector<double> coefficients_;
  double a_, length_;
};

struct ProjectionOptions {
  int modes = 400;
  int cells = 256;            ///< composite quadrature cells over [0, X]
  int points_per_cell = 16;   ///< Gauss-Legendre points per cell
  double check_tolerance = 1e-10;
  int check_samples = 257;    ///< reconstruction self-test resolution
};

/// Project u0 onto the sine basis by composite Gauss-Legendre quadrature and
/// self-check the reconstruction at t = 0; a residual above check_tolerance
/// raises numerical_error quoting the achieved residual.  u0 must vanish at
/// the ends (to the same tolerance).
SineSeries project_sine_series(const std::function<double(double)>& u0, double a, double X,
                               const ProjectionOptions& options = {});

/// Independent evaluator of the same solution by reflections: the odd
/// 2X-periodic extension of u0 averaged along the two characteristics,
/// u(x,t) = (u0~(x - a t) + u0~(x + a t))/2.  Mutual oracle for SineSeries.
double reflected_point_value(const std::function<double(double)>& u0, double a, double X,
                             double x, double t);

/// The experiment's initial profile on [0, 1]: exp(-(10(x - 1/2))^4), a
/// smooth bump that is ~4e-272 at the ends.
double quartic_bump(double x);

} // namespace nlab
