#include "numerovlab/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "numerovlab/scheme.hpp"

namespace nlab {

TauRule TauRule::fixed(double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau rule: tau must be positive");
  return TauRule(true, tau);
}

TauRule TauRule::over_multiplicity(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("tau rule: coefficient must be positive");
  return TauRule(false, c);
}

TauRule TauRule::parse(std::string_view text) {
  const auto slash = text.find('/');
  const auto to_value = [&](std::string_view part) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || ptr != part.data() + part.size())
      throw std::invalid_argument("tau rule: malformed '" + std::string(text) + "'");
    return v;
  };
  if (slash == std::string_view::npos) return fixed(to_value(text));
  if (text.substr(slash + 1) != "K")
    throw std::invalid_argument("tau rule: expected '<c>/K', got '" + std::string(text) + "'");
  return over_multiplicity(to_value(text.substr(0, slash)));
}

double TauRule::value_for(int multiplicity) const {
  if (multiplicity < 1) throw std::invalid_argument("tau rule: multiplicity must be >= 1");
  return fixed_ ? value_ : value_ / multiplicity;
}

std::string TauRule::format() const {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value_);
  std::string s(buf, ptr);
  return fixed_ ? s : s + "/K";
}

ErrorTable error_table(const Mesh& base, std::span<const int> multiplicities,
                       const TauRule& tau_rule, std::span<const double> horizons,
                       const ExperimentSetup& setup) {
  const double X = to_double(base.length());
  const SineSeries reference =
      project_sine_series(setup.initial_profile, setup.a, X, setup.projection);

  ErrorTable table;
  for (int K : multiplicities) {
    const Mesh mesh = extend_mesh(base, K);
    const auto& nodes = mesh.nodes();
    const int n = mesh.interior_count();
    std::vector<double> v0(n), u1(n, 0.0);
    for (int j = 0; j < n; ++j) v0[j] = setup.initial_profile(nodes[j + 1]);

    for (double T : horizons) {
      if (!(T > 0.0)) throw std::invalid_argument("error table: horizons must be positive");
      long long M;
      if (setup.fixed_steps) {
        M = *setup.fixed_steps;
        if (M < 1) throw std::invalid_argument("error table: fixed step count must be >= 1");
      } else {
        const double tau_req = tau_rule.value_for(K);
        M = static_cast<long long>(std::ceil(T / tau_req * (1.0 - 1e-12)));
      }
      const double tau = T / static_cast<double>(M);

      SchemeConfig config{setup.a, tau, M, setup.sigma};
      const CompactWaveScheme scheme(mesh, config);
      RunOptions options;
      options.record_norms = false;
      const RunResult<double> run =
          scheme.run(std::span<const double>(v0), std::span<const double>(u1), options);

      ErrorRow row{K, T, tau, M, 0.0};
      if (run.overflowed) {
        row.error = std::numeric_limits<double>::infinity();
      } else {
        const std::vector<double> exact = reference.evaluate(std::span<const double>(nodes), T);
        double worst = 0.0;  // boundary nodes compare 0 against 0
        for (int j = 1; j <= n; ++j)
          worst = std::max(worst, std::abs(exact[j] - run.final_state.curr[j - 1]));
        worst = std::max({worst, std::abs(exact[0]), std::abs(exact[n + 1])});
        row.error = worst;
      }
      table.rows.push_back(row);
    }
  }
  return table;
}

double practical_rate(double e_at_t1, double e_at_t2, double t1, double t2) {
  if (!(e_at_t1 > 0.0) || !(e_at_t2 > 0.0) || !std::isfinite(e_at_t1) || !std::isfinite(e_at_t2))
    throw std::invalid_argument("practical rate: errors must be positive and finite");
  if (!(t2 > t1)) throw std::invalid_argument("practical rate: need T2 > T1");
  return std::log(e_at_t2 / e_at_t1) / (t2 - t1);
}

namespace {

ConditionCheck sharp_check(double lhs, double rhs) {
  ConditionCheck c;
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = rhs - lhs;
  c.pass = lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs));
  return c;
}

} // namespace

CflReport check_cfl_uniform(const Mesh& mesh, double a, double tau, double eps0_sq) {
  if (!mesh.is_uniform())
    throw std::invalid_argument("the step-ratio form of the stability condition needs a "
                                "uniform mesh");
  if (!(a > 0.0) || !(tau > 0.0)) throw std::invalid_argument("cfl check: need a > 0, tau > 0");
  if (!(eps0_sq > 0.0) || !(eps0_sq < 1.0))
    throw std::invalid_argument("cfl check: eps0^2 must lie in (0, 1)");
  const double h = to_double(mesh.mean_step());
  const double rhs = 1.0 - eps0_sq;
  CflReport r;
  r.ratio_form = sharp_check(a * a * tau * tau / (h * h), rhs);
  r.eigenvalue_form = sharp_check(a * a * tau * tau / 6.0 * uniform_max_eigenvalue(mesh), rhs);
  r.pass = r.ratio_form.pass && r.eigenvalue_form.pass;
  return r;
}

FamilyConditionReport check_family_condition(const Mesh& base, const Spectrum& base_spectrum,
                                             int multiplicity, double tau, double kappa,
                                             double a) {
  if (multiplicity < 1) throw std::invalid_argument("family condition: multiplicity must be >= 1");
  if (!(tau > 0.0) || !(a > 0.0)) throw std::invalid_argument("family condition: need tau, a > 0");
  if (kappa < 0.0) throw std::invalid_argument("family condition: growth allowance must be >= 0");
  FamilyConditionReport r;
  if (base_spectrum.classification == SpectrumClass::AllReal) {
    r.vacuous = true;
    return r;
  }
  const double im = std::abs(base_spectrum.dominant_pair().lambda.imag());
  const double k2 = static_cast<double>(multiplicity) * multiplicity;
  // Mean step of the family mesh is h0/K, so (h0/h)^2 = K^2.
  r.lhs = a * a * im * k2 * tau;
  r.rhs = 4.5 * kappa;
  r.margin = r.rhs - r.lhs;
  r.pass = r.lhs <= r.rhs + 1e-12 * std::max(1.0, r.rhs);
  r.tau_star = r.rhs / (a * a * im * k2);
  const double hmin = to_double(base.min_step()) / multiplicity;
  r.tau_star_over_hmin_sq = r.tau_star / (hmin * hmin);
  return r;
}

CandidateReport evaluate_candidate(std::span<const long long> steps, bool oracle_check) {
  if (steps.size() < 2) throw std::invalid_argument("candidate mesh needs at least 2 steps");
  CandidateReport report;
  report.steps.assign(steps.begin(), steps.end());
  report.denominator = std::accumulate(steps.begin(), steps.end(), 0LL);
  const Mesh mesh =
      Mesh::from_steps(report.steps, report.denominator, Rational(1));
  const Spectrum spec = generalized_spectrum(mesh);
  report.classification = spec.classification;
  report.dominant = spec.dominant_pair().lambda;
  report.growth_rate = nlab::growth_rate(report.dominant, 1.0);
  report.oracle_mismatch = std::numeric_limits<double>::quiet_NaN();
  if (oracle_check && mesh.intervals() <= 16) {
    std::vector<std::complex<double>> roots = charpoly_roots_oracle(mesh);
    double worst = 0.0;
    for (const EigenPair& p : spec.pairs) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t pick = 0;
      for (std::size_t r = 0; r < roots.size(); ++r) {
        const double d = std::abs(roots[r] - p.lambda);
        if (d < best) {
          best = d;
          pick = r;
        }
      }
      worst = std::max(worst, best / std::max(1.0, std::abs(p.lambda)));
      roots.erase(roots.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    report.oracle_mismatch = worst;
  }
  return report;
}

SearchOutcome brute_force_search(const SearchOptions& options,
                                 const std::function<void(const CandidateReport&)>& on_hit) {
  if (options.min_intervals < 2 || options.max_intervals < options.min_intervals)
    throw std::invalid_argument("search: need 2 <= min_intervals <= max_intervals");
  if (options.alphabet.empty()) throw std::invalid_argument("search: empty step alphabet");
  for (long long s : options.alphabet)
    if (s <= 0) throw std::invalid_argument("search: alphabet steps must be positive");

  SearchOutcome outcome;
  std::vector<long long> steps;
  const std::size_t base = options.alphabet.size();
  for (int n0 = options.min_intervals; n0 <= options.max_intervals; ++n0) {
    std::vector<std::size_t> digits(static_cast<std::size_t>(n0), 0);
    bool carry_out = false;
    while (!carry_out) {
      steps.clear();
      for (std::size_t d : digits) steps.push_back(options.alphabet[d]);

      // Canonicalization: skip scaled copies (common factor) and mirrors.
      long long g = 0;
      for (long long s : steps) g = std::gcd(g, s);
      const bool mirror_smaller =
          std::lexicographical_compare(steps.rbegin(), steps.rend(), steps.begin(), steps.end());
      if (g == 1 && !mirror_smaller) {
        if (outcome.examined >= options.budget) {
          outcome.complete = false;
          return outcome;
        }
        ++outcome.examined;
        CandidateReport report =
            evaluate_candidate(std::span<const long long>(steps), options.oracle_check);
        if (report.classification == SpectrumClass::ComplexPresent) {
          if (on_hit) on_hit(report);
          outcome.hits.push_back(std::move(report));
        }
      }

      // Lexicographic increment of the digit vector.
      std::size_t pos = digits.size();
      while (pos > 0) {
        --pos;
        if (++digits[pos] < base) break;
        digits[pos] = 0;
        if (pos == 0) carry_out = true;
      }
    }
  }
  return outcome;
}

} // namespace nlab
