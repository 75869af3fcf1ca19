#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "doctest.h"

#include "corpus.hpp"
#include "numerovlab/operators.hpp"
#include "numerovlab/spectral.hpp"

using namespace nlab;
using cplx = std::complex<double>;

namespace {

// Greedy pairwise matching distance between two eigenvalue sets.
double max_matched_mismatch(std::vector<cplx> a, const std::vector<cplx>& b) {
  double worst = 0.0;
  for (const cplx& z : b) {
    std::size_t pick = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i)
      if (std::abs(a[i] - z) < best) {
        best = std::abs(a[i] - z);
        pick = i;
      }
    worst = std::max(worst, best / std::max(1.0, std::abs(z)));
    a.erase(a.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return worst;
}

} // namespace

TEST_CASE("uniform spectrum: real, positive, closed-form max") {
  const Mesh m = Mesh::uniform(Rational(1), 8);
  const Spectrum s = generalized_spectrum(m);
  REQUIRE(s.pairs.size() == 7);
  CHECK(s.classification == SpectrumClass::AllReal);
  CHECK(s.dominant.size() == 1);
  for (const EigenPair& p : s.pairs) {
    CHECK(std::abs(p.lambda.imag()) <= 1e-8 * std::abs(p.lambda));
    CHECK(p.lambda.real() > 0.0);
    CHECK(p.residual <= 1e-9 * std::max(1.0, std::abs(p.lambda)));
    // Unit l2h norm; leading entry (earliest within the 1e-12 near-tie
    // band) real positive.
    CHECK(l2h_norm(std::span<const cplx>(p.vector), m) == doctest::Approx(1.0).epsilon(1e-12));
    std::size_t lead = 0;
    double best = 0.0;
    for (std::size_t j = 0; j < p.vector.size(); ++j)
      if (std::abs(p.vector[j]) > best * (1.0 + 1e-12)) {
        best = std::abs(p.vector[j]);
        lead = j;
      }
    CHECK(p.vector[lead].real() > 0.0);
    CHECK(std::abs(p.vector[lead].imag()) <= 1e-12 * std::abs(p.vector[lead]));
  }
  // Sorted by modulus, descending.
  for (std::size_t i = 0; i + 1 < s.pairs.size(); ++i)
    CHECK(std::abs(s.pairs[i].lambda) >= std::abs(s.pairs[i + 1].lambda));
  CHECK(s.dominant_pair().lambda.real() ==
        doctest::Approx(uniform_max_eigenvalue(m)).epsilon(1e-10));
}

TEST_CASE("uniform closed forms and their precondition") {
  const Mesh m = Mesh::uniform(Rational(1), 8);
  const double h = 0.125;
  const double s = std::sin(std::numbers::pi * 7.0 / 16.0);
  const double lap_max = 4.0 / (h * h) * s * s;
  CHECK(uniform_max_laplacian_eigenvalue(m) == doctest::Approx(lap_max).epsilon(1e-14));
  CHECK(uniform_max_eigenvalue(m) ==
        doctest::Approx(lap_max / (1.0 - h * h / 12.0 * lap_max)).epsilon(1e-14));
  CHECK_THROWS_AS(uniform_max_eigenvalue(testing::critical_mesh()), std::invalid_argument);
  CHECK_THROWS_AS(uniform_max_laplacian_eigenvalue(testing::critical_mesh()),
                  std::invalid_argument);
}

TEST_CASE("critical mesh: complex dominant pair with exact conjugate symmetry") {
  const Spectrum s = generalized_spectrum(testing::critical_mesh());
  REQUIRE(s.pairs.size() == 13);
  CHECK(s.classification == SpectrumClass::ComplexPresent);
  REQUIRE(s.dominant.size() == 2);

  const cplx dom = s.dominant_pair().lambda;
  CHECK(dom.real() == doctest::Approx(3529.9).epsilon(2e-4));
  CHECK(std::abs(dom.imag()) == doctest::Approx(27.2044).epsilon(2e-4));
  CHECK(dom.imag() > 0.0);  // upper-half member listed first

  // The conjugate is present exactly (symmetrized, not just approximately).
  const cplx partner = s.pairs[s.dominant[1]].lambda;
  CHECK(partner == std::conj(dom));

  // All other eigenvalues are real positive at the classification tolerance.
  int complex_count = 0;
  for (const EigenPair& p : s.pairs)
    if (std::abs(p.lambda.imag()) > 1e-8 * std::max(1.0, std::abs(p.lambda.real())))
      ++complex_count;
  CHECK(complex_count == 2);

  // Residuals: every pair solves the pencil to its construction tolerance.
  for (const EigenPair& p : s.pairs)
    CHECK(p.residual <= 1e-9 * std::max(1.0, std::abs(p.lambda)));

  // Conjugate eigenvectors: the partner's vector is the conjugate of the
  // dominant one (same normalization phase).
  const auto& v0 = s.dominant_pair().vector;
  const auto& v1 = s.pairs[s.dominant[1]].vector;
  REQUIRE(v0.size() == v1.size());
  for (std::size_t j = 0; j < v0.size(); ++j) CHECK(std::abs(v1[j] - std::conj(v0[j])) < 1e-12);
}

TEST_CASE("charpoly oracle agrees with the solver") {
  for (const Mesh& m :
       {Mesh::uniform(Rational(1), 8), testing::critical_mesh(),
        testing::mesh_from_digits({1, 3, 5, 1, 3, 4})}) {
    const Spectrum s = generalized_spectrum(m);
    std::vector<cplx> lambdas;
    for (const EigenPair& p : s.pairs) lambdas.push_back(p.lambda);
    CHECK(max_matched_mismatch(charpoly_roots_oracle(m), lambdas) < 1e-9);
  }
  CHECK_THROWS_AS(charpoly_roots_oracle(Mesh::uniform(Rational(1), 17)), std::invalid_argument);
  CHECK_NOTHROW(charpoly_roots_oracle(Mesh::uniform(Rational(1), 16)));
}

TEST_CASE("classify honors its tolerance") {
  Spectrum s;
  s.pairs.push_back({cplx(100.0, 5e-5), {}, 0.0});
  CHECK(classify(s, 1e-8) == SpectrumClass::ComplexPresent);  // 5e-5 > 1e-8 * 100
  CHECK(classify(s, 1e-6) == SpectrumClass::AllReal);         // 5e-5 <= 1e-6 * 100
  CHECK(classify(s) == SpectrumClass::ComplexPresent);
}

TEST_CASE("family scaling: eigenvalues go like K^2, vectors extend") {
  const ScalingCheck chk = verify_scaling(testing::critical_mesh(), 2);
  REQUIRE(chk.rows.size() == 13);
  CHECK(chk.max_eigenvalue_defect <= 1e-8);
  CHECK(chk.max_extension_residual <= 1e-8);
  CHECK(chk.dominant_extension_residual <= 1e-8);
  for (const ScalingRow& r : chk.rows)
    CHECK(std::abs(r.matched_lambda - 4.0 * r.base_lambda) <=
          1e-8 * std::abs(4.0 * r.base_lambda));
}

TEST_CASE("spectrum csv header and determinism") {
  const Spectrum s = generalized_spectrum(Mesh::uniform(Rational(1), 4));
  std::ostringstream a, b;
  write_spectrum_csv(s, a);
  write_spectrum_csv(s, b);
  const std::string csv = a.str();
  CHECK(csv == b.str());
  CHECK(csv.substr(0, 21) == "index,re,im,residual\n");
  // One line per eigenvalue plus the header.
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
