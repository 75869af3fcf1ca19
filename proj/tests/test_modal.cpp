#include <cmath>
#include <complex>

#include "doctest.h"

#include "numerovlab/modal.hpp"

using namespace nlab;
using cplx = std::complex<double>;

namespace {
const cplx kCriticalLambda{3529.9, 27.2044};
}

TEST_CASE("growth_rate closed forms") {
  // Real nonnegative eigenvalues: exactly zero, no roundoff crumbs.
  CHECK(growth_rate(cplx(100.0, 0.0), 1.0) == 0.0);
  CHECK(growth_rate(cplx(0.0, 0.0), 2.0) == 0.0);

  // Real negative: |lambda| - Re = 2|lambda|, so kappa0 = a sqrt(|lambda|).
  CHECK(growth_rate(cplx(-9.0, 0.0), 1.0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(growth_rate(cplx(-9.0, 0.0), 2.0) == doctest::Approx(6.0).epsilon(1e-14));

  // Pure imaginary: |lambda| - Re = |Im|.
  CHECK(growth_rate(cplx(0.0, 16.0), 1.0) ==
        doctest::Approx(std::sqrt(8.0)).epsilon(1e-14));

  // The critical pair lands in the published band, and scales linearly in a.
  const double k0 = growth_rate(kCriticalLambda, 1.0);
  CHECK(k0 > 0.2285);
  CHECK(k0 < 0.2295);
  CHECK(growth_rate(kCriticalLambda, 3.0) == doctest::Approx(3.0 * k0).epsilon(1e-14));

  // Cancellation-free branch: huge Re, small Im keeps full precision.
  // The naive |lambda| - Re cancels to zero here; the stable identity
  // Im^2/(|lambda| + Re) keeps every digit.
  const cplx skinny(1e12, 1.0);
  const double stable = std::sqrt(0.5 / (std::abs(skinny) + skinny.real()));
  CHECK(stable > 0.0);
  CHECK(growth_rate(skinny, 1.0) == doctest::Approx(stable).epsilon(1e-12));
}

TEST_CASE("amplification: reciprocal roots, |q| >= 1, stable real mode") {
  const ModalParams p{kCriticalLambda, 1e-3, 1.0, 1.0 / 12.0};
  const AmplificationResult r = amplification(p);
  CHECK(std::abs(r.q * r.q_inv - 1.0) < 1e-12);
  CHECK(std::abs(r.q + r.q_inv - 2.0 * r.mu) < 1e-12);
  CHECK(r.abs_q == std::abs(r.q));
  CHECK(r.abs_q > 1.0);
  CHECK_FALSE(r.degenerate);

  // Real eigenvalue under the magnitude condition: |q| = 1 exactly (the two
  // roots are conjugate on the unit circle).
  const AmplificationResult stable = amplification({cplx(100.0, 0.0), 1e-2, 1.0, 1.0 / 12.0});
  CHECK(stable.abs_q == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(stable.mu.imag()) < 1e-15);
  CHECK(stable.mu.real() < 1.0);
  // Tie broken toward nonnegative imaginary part.
  CHECK(stable.q.imag() >= 0.0);
}

TEST_CASE("amplification degenerate and pole cases") {
  // lambda = 0: mu = 1 double root q = 1.
  const AmplificationResult flat = amplification({cplx(0.0, 0.0), 1e-2, 1.0, 1.0 / 12.0});
  CHECK(flat.degenerate);
  CHECK(flat.q == cplx(1.0, 0.0));

  // tau^2 a^2 lambda = 6 with sigma = 1/12 gives mu = -1: double root q = -1
  // (tau = 1/1024 keeps tau^2 lambda exact in binary).
  const double tau_pow2 = 1.0 / 1024.0;
  const AmplificationResult fold =
      amplification({cplx(6.0 * 1024.0 * 1024.0, 0.0), tau_pow2, 1.0, 1.0 / 12.0});
  CHECK(fold.degenerate);
  CHECK(std::abs(fold.q + 1.0) < 1e-7);

  // 1 + alpha = 0 is a pole of mu: rejected as a precondition.
  const double tau = 1e-2;
  const double sigma = 1.0 / 12.0;
  const cplx pole_lambda(-1.0 / (sigma * tau * tau), 0.0);
  CHECK_THROWS_AS(amplification({pole_lambda, tau, 1.0, sigma}), std::invalid_argument);
}

TEST_CASE("amplification parameter validation") {
  CHECK_THROWS_AS(amplification({cplx(1.0, 0.0), 0.0, 1.0, 1.0 / 12.0}), std::invalid_argument);
  CHECK_THROWS_AS(amplification({cplx(1.0, 0.0), -1e-3, 1.0, 1.0 / 12.0}), std::invalid_argument);
  CHECK_THROWS_AS(amplification({cplx(1.0, 0.0), 1e-3, 0.0, 1.0 / 12.0}), std::invalid_argument);
}

TEST_CASE("modal recursion matches the explicit solution") {
  for (double sigma : {1.0 / 12.0, 1.0 / 6.0}) {
    const ModalParams p{kCriticalLambda, 5e-4, 1.0, sigma};
    const cplx c0(1.0, -0.5), c1(0.25, 0.75);
    const ModalTrajectory tr = modal_recursion(p, c0, c1, 400);
    REQUIRE(tr.values.size() == 401);
    CHECK(tr.values[0] == c0);
    REQUIRE(tr.explicit_valid);

    // y^1 = mu c0 + c1/(1+alpha) by definition.
    const cplx y1 = tr.amp.mu * c0 + c1 / (1.0 + tr.alpha);
    CHECK(std::abs(tr.values[1] - y1) < 1e-14 * std::abs(y1));

    // a_+ q^m + a_- q^-m reproduces the recursion throughout.
    double scale = 0.0;
    for (long long m = 0; m <= 400; ++m) scale = std::max(scale, std::abs(tr.values[m]));
    for (long long m = 0; m <= 400; m += 40)
      CHECK(std::abs(tr.values[m] - tr.explicit_value(m)) < 1e-10 * scale);

    // Coefficients recover the data: a_+ + a_- = c0.
    CHECK(std::abs(tr.a_plus + tr.a_minus - c0) < 1e-12);
  }
}

TEST_CASE("growth prediction: exact factor vs asymptotic rate") {
  const ModalParams p{kCriticalLambda, 1e-4, 1.0, 1.0 / 12.0};
  const GrowthPrediction g = growth_prediction(p, 1.0);
  CHECK(g.steps == 10000);
  const double kappa0 = growth_rate(kCriticalLambda, 1.0);
  CHECK(g.asymptotic_factor == doctest::Approx(std::exp(kappa0)).epsilon(1e-12));
  CHECK(g.exact_factor == doctest::Approx(std::pow(amplification(p).abs_q, 10000)).epsilon(1e-10));
  CHECK(g.ratio == doctest::Approx(g.exact_factor / g.asymptotic_factor).epsilon(1e-12));
  // At tau = 1e-4 the per-step defect is O(tau^2), so over T = 1 the exact and
  // asymptotic factors agree to a fraction of a percent.
  CHECK(std::abs(g.ratio - 1.0) < 1e-2);

  // T must be an integer multiple of tau.
  CHECK_THROWS_AS(growth_prediction(p, 1.00005), std::invalid_argument);
}

TEST_CASE("necessary conditions: magnitude, imaginary part, spectral radius") {
  const double kappa0 = growth_rate(kCriticalLambda, 1.0);

  // Small tau with allowance 1.1*kappa0: everything passes.
  const NecessaryConditions ok =
      necessary_conditions({kCriticalLambda, 1e-4, 1.0, 1.0 / 12.0}, 1.1 * kappa0);
  CHECK(ok.magnitude.pass);
  CHECK(ok.imaginary.pass);
  CHECK(ok.spectral.pass);
  CHECK(ok.all_pass);
  CHECK(ok.magnitude.lhs ==
        doctest::Approx(1e-8 / 6.0 * std::max(std::abs(kCriticalLambda.real()),
                                              2.0 * std::abs(kCriticalLambda.imag())))
            .epsilon(1e-12));
  CHECK(ok.magnitude.rhs == 1.0);
  CHECK(ok.imaginary.lhs == doctest::Approx(27.2044e-4).epsilon(1e-12));
  CHECK(ok.imaginary.rhs == doctest::Approx(4.5 * 1.1 * kappa0).epsilon(1e-12));

  // Zero allowance: a complex eigenvalue cannot satisfy the imaginary-part
  // condition (or keep |q| <= 1).
  const NecessaryConditions zero =
      necessary_conditions({kCriticalLambda, 1e-4, 1.0, 1.0 / 12.0}, 0.0);
  CHECK_FALSE(zero.imaginary.pass);
  CHECK_FALSE(zero.spectral.pass);
  CHECK_FALSE(zero.all_pass);
  CHECK(zero.imaginary.margin < 0.0);

  // A stable real mode passes everything with zero allowance.
  const NecessaryConditions real_ok =
      necessary_conditions({cplx(100.0, 0.0), 1e-3, 1.0, 1.0 / 12.0}, 0.0);
  CHECK(real_ok.all_pass);

  // Giant tau breaks the magnitude condition.
  const NecessaryConditions big =
      necessary_conditions({kCriticalLambda, 1.0, 1.0, 1.0 / 12.0}, 1.1 * kappa0);
  CHECK_FALSE(big.magnitude.pass);
}
