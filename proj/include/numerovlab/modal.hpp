#pragma once

#include <complex>
#include <vector>

namespace nlab {

/// Scalar-mode parameters: one pencil eigenvalue lambda together with the
/// time step, wave speed, and implicitness weight sigma (default 1/12, the
/// fourth-order choice).
struct ModalParams {
  std::complex<double> lambda;
  double tau = 0.0;
  double a = 1.0;
  double sigma = 1.0 / 12.0;

  /// alpha = sigma * tau^2 * a^2 * lambda.
  std::complex<double> alpha() const { return sigma * tau * tau * a * a * lambda; }
};

/// Per-step amplification: mu = (1 + (sigma - 1/2) tau^2 a^2 lambda)/(1 + alpha),
/// and the characteristic roots of q^2 - 2 mu q + 1 = 0.  q is the root with
/// |q| >= 1 (ties broken toward nonnegative imaginary part); q_inv is the
/// other root, so q*q_inv = 1 and q + q_inv = 2 mu.
struct AmplificationResult {
  std::complex<double> mu;
  std::complex<double> q;
  std::complex<double> q_inv;
  double abs_q = 1.0;
  bool degenerate = false;  ///< mu = +-1 within 1e-14: double root q = +-1
};
AmplificationResult amplification(const ModalParams& params);

/// Exponential growth rate per unit time, (a/sqrt2) * sqrt(|lambda| - Re lambda).
/// Zero exactly when lambda is real nonnegative.  Evaluated cancellation-free
/// for Re lambda > 0 via |lambda| - Re = Im^2/(|lambda| + Re).
double growth_rate(std::complex<double> lambda, double a);

/// Scalar three-term evolution y^{m+1} = 2 mu y^m - y^{m-1} with y^0 = c0 and
/// y^1 = mu c0 + c1/(1+alpha), plus the closed form y^m = ap q^m + am q^{-m}
/// with ap/am = c0/2 +- (q/(q^2-1)) c1/(1+alpha), valid when mu != +-1.
struct ModalTrajectory {
  std::complex<double> c0, c1;
  std::complex<double> a_plus, a_minus;
  AmplificationResult amp;
  std::complex<double> alpha;
  bool explicit_valid = false;  ///< closed form defined (non-degenerate mu)
  std::vector<std::complex<double>> values;  ///< y^0 .. y^M by the recursion

  std::complex<double> explicit_value(long long m) const;
};
ModalTrajectory modal_recursion(const ModalParams& params, std::complex<double> c0,
                                std::complex<double> c1, long long steps);

/// Growth over a horizon T = M tau: the exact factor |q|^M against the
/// asymptotic e^{growth_rate * T}.
struct GrowthPrediction {
  long long steps = 0;
  double exact_factor = 1.0;
  double asymptotic_factor = 1.0;
  double ratio = 1.0;
};
GrowthPrediction growth_prediction(const ModalParams& params, double T);

/// One inequality `lhs <= rhs`, evaluated in sharp form (asymptotic O(tau)
/// remainders dropped); margin = rhs - lhs, so negative margin means failure.
struct ConditionCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = true;
  double margin = 0.0;
};

/// The necessary stability conditions for one mode, given a growth allowance
/// kappa (kappa = 0 asks for no growth at all):
///   magnitude:  (1/6) a^2 tau^2 max{|Re lambda|, 2|Im lambda|} <= 1
///   imaginary:  a^2 |Im lambda| tau <= (9/2) kappa
///   spectral:   |q| <= 1 + kappa tau
struct NecessaryConditions {
  ConditionCheck magnitude, imaginary, spectral;
  bool all_pass = true;
};
NecessaryConditions necessary_conditions(const ModalParams& params, double kappa);

} // namespace nlab
