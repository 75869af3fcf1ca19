#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <span>

#include "numerovlab/mesh.hpp"
#include "numerovlab/tridiagonal.hpp"

namespace nlab {

/// Averaging weights at one interior node from its two adjacent steps.
/// The triple satisfies (alpha + 10*gamma + beta)/12 = 1 identically.
struct NumerovWeight {
  double alpha, gamma, beta;
};
inline NumerovWeight numerov_weight(double h, double hplus) {
  const double hhat = 0.5 * (h + hplus);
  const double d = hplus - h;
  return {2.0 - hplus * hplus / (h * hhat), 1.0 + d * d / (5.0 * h * hplus),
          2.0 - h * h / (hplus * hhat)};
}

/// Per-node weights over the whole mesh.
struct NumerovCoeffs {
  std::vector<double> alpha, gamma, beta;
  std::size_t size() const noexcept { return gamma.size(); }
};
NumerovCoeffs numerov_coeffs(const Mesh& mesh);

/// Second-difference operator on interior nodes with Dirichlet truncation:
/// row j = ( 1/(hhat_j h_j),  -(1/h_j + 1/h_{j+1})/hhat_j,  1/(hhat_j h_{j+1}) ).
TridiagonalOperator laplacian(const Mesh& mesh);

/// Numerov averaging: row j = (alpha_j, 10*gamma_j, beta_j)/12.
TridiagonalOperator numerov_average(const Mesh& mesh);

/// Implicit step operator numerov_average - sigma*tau^2*a^2*laplacian.
TridiagonalOperator step_operator(const Mesh& mesh, double tau, double a, double sigma);

/// Mesh inner product (v, w) = sum_j v_j conj(w_j) hhat_j over interior nodes.
double inner_product(std::span<const double> v, std::span<const double> w, const Mesh& mesh);
std::complex<double> inner_product(std::span<const std::complex<double>> v,
                                   std::span<const std::complex<double>> w, const Mesh& mesh);

template <class T>
double l2h_norm(std::span<const T> w, const Mesh& mesh) {
  const auto& hhat = mesh.half_steps();
  if (w.size() != hhat.size()) throw std::invalid_argument("l2h_norm: dimension mismatch");
  double acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) acc += std::norm(w[j]) * hhat[j];
  return std::sqrt(acc);
}

/// Discrete H1-type seminorm sqrt(sum_{j=1..N} |w_j - w_{j-1}|^2 / h_j) with
/// boundary values zero; equals sqrt((-laplacian w, w)) by summation by parts.
template <class T>
double dirichlet_norm(std::span<const T> w, const Mesh& mesh) {
  const auto& h = mesh.steps();
  if (w.size() + 1 != h.size()) throw std::invalid_argument("dirichlet_norm: dimension mismatch");
  double acc = std::norm(w[0]) / h[0];
  for (std::size_t j = 1; j < w.size(); ++j) acc += std::norm(w[j] - w[j - 1]) / h[j];
  acc += std::norm(w[w.size() - 1]) / h[w.size()];
  return std::sqrt(acc);
}

/// True when the Numerov quadratic form (numerov_average w, w) is real
/// symmetric positive on this mesh: hhat_j beta_j = hhat_{j+1} alpha_{j+1}
/// for all j, and the symmetric form is positive definite.  Always true on
/// uniform meshes; fails on meshes like the critical one.
bool numerov_form_symmetric_positive(const Mesh& mesh);

/// The four mesh norms of one vector.  `numerov` is set only when the
/// Numerov form is symmetric positive (see above); its absence is a marker,
/// not an error.
struct NormBundle {
  double l2h = 0.0;
  double dirichlet = 0.0;
  double neg_laplacian_inverse = 0.0;
  std::optional<double> numerov;
};
NormBundle norms(std::span<const double> w, const Mesh& mesh);
NormBundle norms(std::span<const std::complex<double>> w, const Mesh& mesh);

} // namespace nlab
