#include "numerovlab/operators.hpp"

#include <algorithm>

namespace nlab {

NumerovCoeffs numerov_coeffs(const Mesh& mesh) {
  const auto& h = mesh.steps();
  const int n = mesh.interior_count();
  NumerovCoeffs c;
  c.alpha.resize(n);
  c.gamma.resize(n);
  c.beta.resize(n);
  for (int j = 0; j < n; ++j) {
    const NumerovWeight w = numerov_weight(h[j], h[j + 1]);
    c.alpha[j] = w.alpha;
    c.gamma[j] = w.gamma;
    c.beta[j] = w.beta;
  }
  return c;
}

TridiagonalOperator laplacian(const Mesh& mesh) {
  const auto& h = mesh.steps();
  const auto& hhat = mesh.half_steps();
  const int n = mesh.interior_count();
  std::vector<double> sub(n - 1), diag(n), super(n - 1);
  for (int j = 0; j < n; ++j) {
    diag[j] = -(1.0 / h[j] + 1.0 / h[j + 1]) / hhat[j];
    if (j > 0) sub[j - 1] = 1.0 / (hhat[j] * h[j]);
    if (j + 1 < n) super[j] = 1.0 / (hhat[j] * h[j + 1]);
  }
  return TridiagonalOperator(std::move(sub), std::move(diag), std::move(super));
}

TridiagonalOperator numerov_average(const Mesh& mesh) {
  const NumerovCoeffs c = numerov_coeffs(mesh);
  const int n = static_cast<int>(c.size());
  std::vector<double> sub(n - 1), diag(n), super(n - 1);
  for (int j = 0; j < n; ++j) {
    diag[j] = 10.0 * c.gamma[j] / 12.0;
    if (j > 0) sub[j - 1] = c.alpha[j] / 12.0;
    if (j + 1 < n) super[j] = c.beta[j] / 12.0;
  }
  return TridiagonalOperator(std::move(sub), std::move(diag), std::move(super));
}

TridiagonalOperator step_operator(const Mesh& mesh, double tau, double a, double sigma) {
  if (!(tau > 0.0) || !(a > 0.0)) throw std::invalid_argument("step_operator: need tau > 0, a > 0");
  return linear_combination(1.0, numerov_average(mesh), -sigma * tau * tau * a * a,
                            laplacian(mesh));
}

double inner_product(std::span<const double> v, std::span<const double> w, const Mesh& mesh) {
  const auto& hhat = mesh.half_steps();
  if (v.size() != hhat.size() || w.size() != hhat.size())
    throw std::invalid_argument("inner_product: dimension mismatch");
  double acc = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) acc += v[j] * w[j] * hhat[j];
  return acc;
}

std::complex<double> inner_product(std::span<const std::complex<double>> v,
                                   std::span<const std::complex<double>> w, const Mesh& mesh) {
  const auto& hhat = mesh.half_steps();
  if (v.size() != hhat.size() || w.size() != hhat.size())
    throw std::invalid_argument("inner_product: dimension mismatch");
  std::complex<double> acc = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) acc += v[j] * std::conj(w[j]) * hhat[j];
  return acc;
}

bool numerov_form_symmetric_positive(const Mesh& mesh) {
  const auto& hhat = mesh.half_steps();
  const TridiagonalOperator s = numerov_average(mesh);
  const std::size_t n = s.size();
  // Symmetry of B = diag(hhat) * s in the Euclidean sense: B(j, j+1) = B(j+1, j).
  double scale = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j)
    scale = std::max({scale, std::abs(hhat[j] * s.super(j)), std::abs(hhat[j + 1] * s.sub(j))});
  for (std::size_t j = 0; j + 1 < n; ++j)
    if (std::abs(hhat[j] * s.super(j) - hhat[j + 1] * s.sub(j)) > 1e-12 * std::max(1.0, scale))
      return false;
  // Positive definiteness via LDL^T pivots of the symmetric B.
  double prev = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double d = hhat[j] * s.diag(j);
    if (j > 0) {
      const double off = hhat[j] * s.sub(j - 1);
      d -= off * off / prev;
    }
    if (!(d > 0.0)) return false;
    prev = d;
  }
  return true;
}

namespace {

inline double conj_of(double x) { return x; }
inline std::complex<double> conj_of(const std::complex<double>& x) { return std::conj(x); }

template <class T>
NormBundle norms_impl(std::span<const T> w, const Mesh& mesh) {
  NormBundle out;
  out.l2h = l2h_norm(w, mesh);
  out.dirichlet = dirichlet_norm(w, mesh);
  const TridiagonalOperator lap = laplacian(mesh);
  const TridiagonalOperator neg = linear_combination(-1.0, lap, 0.0, lap);
  const std::vector<T> z = tridiag_solve(neg, w);
  // ((-lap)^{-1} w, w): real nonnegative by symmetry; clamp rounding.
  double sq = 0.0;
  const auto& hhat = mesh.half_steps();
  for (std::size_t j = 0; j < w.size(); ++j) sq += std::real(z[j] * conj_of(w[j])) * hhat[j];
  out.neg_laplacian_inverse = std::sqrt(std::max(0.0, sq));
  if (numerov_form_symmetric_positive(mesh)) {
    const TridiagonalOperator s = numerov_average(mesh);
    const std::vector<T> sw = s.apply(w);
    double nsq = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) nsq += std::real(sw[j] * conj_of(w[j])) * hhat[j];
    out.numerov = std::sqrt(std::max(0.0, nsq));
  }
  return out;
}

} // namespace

NormBundle norms(std::span<const double> w, const Mesh& mesh) { return norms_impl(w, mesh); }
NormBundle norms(std::span<const std::complex<double>> w, const Mesh& mesh) {
  return norms_impl(w, mesh);
}

} // namespace nlab
