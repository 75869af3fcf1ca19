#include "numerovlab/modal.hpp"

#include <cmath>
#include <stdexcept>

namespace nlab {

namespace {

using cplx = std::complex<double>;

void check_params(const ModalParams& p) {
  if (!(p.tau > 0.0)) throw std::invalid_argument("modal: tau must be positive");
  if (!(p.a > 0.0)) throw std::invalid_argument("modal: wave speed must be positive");
  if (!std::isfinite(p.sigma)) throw std::invalid_argument("modal: sigma must be finite");
}

} // namespace

AmplificationResult amplification(const ModalParams& p) {
  check_params(p);
  const cplx alpha = p.alpha();
  const cplx denom = 1.0 + alpha;
  if (std::abs(denom) <= 1e-14 * std::max(1.0, std::abs(alpha)))
    throw std::invalid_argument("modal: pole at alpha = -1 (step operator annihilates the mode)");
  const double x = p.tau * p.tau * p.a * p.a;
  const cplx mu = (1.0 + (p.sigma - 0.5) * x * p.lambda) / denom;

  AmplificationResult out;
  out.mu = mu;
  // (mu-1)(mu+1) instead of mu^2-1: keeps accuracy near the double roots.
  const cplx s = std::sqrt((mu - 1.0) * (mu + 1.0));
  const cplx q1 = mu + s, q2 = mu - s;
  const double a1 = std::abs(q1), a2 = std::abs(q2);
  if (std::abs(a1 - a2) <= 1e-12 * std::max(1.0, a1)) {
    out.q = (q1.imag() >= 0.0) ? q1 : q2;  // unit-circle tie: nonnegative imag part
  } else {
    out.q = (a1 >= a2) ? q1 : q2;
  }
  out.q_inv = 1.0 / out.q;
  out.abs_q = std::abs(out.q);
  out.degenerate = std::abs(mu - 1.0) <= 1e-14 || std::abs(mu + 1.0) <= 1e-14;
  return out;
}

double growth_rate(cplx lambda, double a) {
  const double mod = std::abs(lambda);
  const double re = lambda.real(), im = lambda.imag();
  const double gap = (re > 0.0) ? im * im / (mod + re) : mod - re;
  return a * std::sqrt(0.5 * gap);
}

std::complex<double> ModalTrajectory::explicit_value(long long m) const {
  if (!explicit_valid)
    throw std::invalid_argument("modal trajectory: closed form undefined for degenerate mu");
  const cplx qm = std::pow(amp.q, static_cast<double>(m));
  return a_plus * qm + a_minus / qm;
}

ModalTrajectory modal_recursion(const ModalParams& p, cplx c0, cplx c1, long long steps) {
  if (steps < 0) throw std::invalid_argument("modal: step count must be nonnegative");
  ModalTrajectory t;
  t.amp = amplification(p);
  t.alpha = p.alpha();
  t.c0 = c0;
  t.c1 = c1;
  t.explicit_valid = !t.amp.degenerate;
  if (t.explicit_valid) {
    const cplx forced = (t.amp.q / (t.amp.q * t.amp.q - 1.0)) * c1 / (1.0 + t.alpha);
    t.a_plus = 0.5 * c0 + forced;
    t.a_minus = 0.5 * c0 - forced;
  }
  t.values.resize(static_cast<std::size_t>(steps) + 1);
  t.values[0] = c0;
  if (steps >= 1) t.values[1] = t.amp.mu * c0 + c1 / (1.0 + t.alpha);
  const cplx two_mu = 2.0 * t.amp.mu;
  for (long long m = 1; m < steps; ++m)
    t.values[m + 1] = two_mu * t.values[m] - t.values[m - 1];
  return t;
}

GrowthPrediction growth_prediction(const ModalParams& p, double T) {
  check_params(p);
  if (!(T > 0.0)) throw std::invalid_argument("modal: horizon T must be positive");
  const double ratio = T / p.tau;
  const long long M = std::llround(ratio);
  if (M < 1 || std::abs(static_cast<double>(M) * p.tau - T) > 1e-9 * std::max(1.0, T))
    throw std::invalid_argument("modal: T must be an integer multiple of tau");
  GrowthPrediction g;
  g.steps = M;
  g.exact_factor = std::pow(amplification(p).abs_q, static_cast<double>(M));
  g.asymptotic_factor = std::exp(growth_rate(p.lambda, p.a) * T);
  g.ratio = g.exact_factor / g.asymptotic_factor;
  return g;
}

namespace {

ConditionCheck make_check(double lhs, double rhs) {
  ConditionCheck c;
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = rhs - lhs;
  // Tiny relative slack so designed boundary cases (|q| = 1 up to rounding)
  // do not flicker.
  c.pass = lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs));
  return c;
}

} // namespace

NecessaryConditions necessary_conditions(const ModalParams& p, double kappa) {
  check_params(p);
  if (kappa < 0.0) throw std::invalid_argument("modal: growth allowance must be nonnegative");
  const double asq = p.a * p.a;
  const double re = std::abs(p.lambda.real()), im = std::abs(p.lambda.imag());
  NecessaryConditions r;
  r.magnitude = make_check(asq * p.tau * p.tau / 6.0 * std::max(re, 2.0 * im), 1.0);
  r.imaginary = make_check(asq * im * p.tau, 4.5 * kappa);
  r.spectral = make_check(amplification(p).abs_q, 1.0 + kappa * p.tau);
  r.all_pass = r.magnitude.pass && r.imaginary.pass && r.spectral.pass;
  return r;
}

} // namespace nlab
