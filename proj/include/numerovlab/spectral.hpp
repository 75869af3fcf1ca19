#pragma once

#include <complex>
#include <cstddef>
#include <ostream>
#include <vector>

#include "numerovlab/mesh.hpp"

namespace nlab {

/// One eigenpair of the pencil  -laplacian e = lambda * numerov_average e.
/// The vector is normalized to unit l2h norm with its largest-magnitude entry
/// real positive (magnitudes within relative 1e-12 count as tied and the
/// earliest wins); residual = || laplacian e + lambda numerov_average e ||_l2h.
struct EigenPair {
  std::complex<double> lambda;
  std::vector<std::complex<double>> vector;
  double residual = 0.0;
};

enum class SpectrumClass { AllReal, ComplexPresent };

/// Full spectrum, sorted by |lambda| descending (ties: larger Re first, then
/// larger Im, so a conjugate pair appears with the upper-half member first).
struct Spectrum {
  std::vector<EigenPair> pairs;
  SpectrumClass classification = SpectrumClass::AllReal;  // at default tolerance 1e-8
  std::vector<std::size_t> dominant;                      // indices of max-modulus pair(s)

  const EigenPair& dominant_pair() const { return pairs.at(dominant.at(0)); }
};

/// Eigenvalues and eigenvectors of the generalized problem, computed by
/// reducing to the dense nonsymmetric M = -(numerov_average)^{-1} laplacian
/// (one tridiagonal solve per column), running Hessenberg + implicit
/// double-shift QR on M, then recovering each eigenvector by inverse
/// iteration on the pencil itself.  Conjugate pairs are symmetrized.
/// Throws numerical_error if the averaging operator is singular on the mesh
/// or the QR iteration fails to converge within 100*(N-1) sweeps.
Spectrum generalized_spectrum(const Mesh& mesh);

/// Independent desk-scale oracle (N <= 16): roots of det(-laplacian -
/// lambda*numerov_average), with the determinant evaluated by the tridiagonal
/// three-term recurrence and roots found by Aberth-style simultaneous
/// iteration.  Shares no code path with generalized_spectrum.
std::vector<std::complex<double>> charpoly_roots_oracle(const Mesh& mesh);

/// COMPLEX_PRESENT iff some |Im lambda| > tol_imag * max(1, |Re lambda|).
SpectrumClass classify(const Spectrum& spectrum, double tol_imag = 1e-8);

/// Eigenvalue/eigenvector scaling from a base mesh to its K-fold family:
/// every base eigenvalue lambda0 must reappear as lambda0*K^2 in the extended
/// spectrum, and the extended function extend_function(e0) must solve the
/// extended pencil.  extension_residual is relative to |lambda0 K^2|.
struct ScalingRow {
  std::complex<double> base_lambda;
  std::complex<double> matched_lambda;
  double eigenvalue_defect = 0.0;   // |matched - lambda0 K^2| / |lambda0 K^2|
  double extension_residual = 0.0;  // pencil residual of the extended eigenvector
};
struct ScalingCheck {
  std::vector<ScalingRow> rows;
  double max_eigenvalue_defect = 0.0;
  double max_extension_residual = 0.0;
  double dominant_extension_residual = 0.0;
};
ScalingCheck verify_scaling(const Mesh& base, int multiplicity);

/// Closed forms for uniform meshes (rejected otherwise):
/// largest eigenvalue of -laplacian, (4/h^2) sin^2(pi (N-1)/(2N)), and of the
/// pencil, the former divided by 1 - (h^2/12) * it.
double uniform_max_laplacian_eigenvalue(const Mesh& mesh);
double uniform_max_eigenvalue(const Mesh& mesh);

/// CSV export with header (index, re, im, residual), sorted as stored.
void write_spectrum_csv(const Spectrum& spectrum, std::ostream& os);

} // namespace nlab
