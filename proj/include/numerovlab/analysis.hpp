#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "numerovlab/mesh.hpp"
#include "numerovlab/modal.hpp"
#include "numerovlab/reference.hpp"
#include "numerovlab/spectral.hpp"

namespace nlab {

/// Time-step rule for family runs: either a fixed tau or tau = c/K.
class TauRule {
public:
  static TauRule fixed(double tau);
  static TauRule over_multiplicity(double c);  ///< tau = c/K
  static TauRule parse(std::string_view text);  ///< "0.0005" or "0.01/K"

  double value_for(int multiplicity) const;
  bool is_fixed() const noexcept { return fixed_; }
  double parameter() const noexcept { return value_; }
  std::string format() const;
  bool operator==(const TauRule&) const = default;

private:
  TauRule(bool fixed, double value) : fixed_(fixed), value_(value) {}
  bool fixed_ = true;
  double value_ = 0.0;
};

struct ErrorRow {
  int multiplicity = 1;  // K
  double horizon = 0.0;  // T
  double tau = 0.0;
  long long steps = 0;   // M, with tau*M = T
  double error = 0.0;    // max nodal |u - v| at T; +inf when the run overflowed
};
struct ErrorTable {
  std::vector<ErrorRow> rows;
};

/// Everything the experiment driver needs besides mesh and schedule.
struct ExperimentSetup {
  std::function<double(double)> initial_profile = quartic_bump;
  double a = 1.0;
  double sigma = 1.0 / 12.0;
  std::optional<long long> fixed_steps;  ///< hold M fixed instead of tau
  ProjectionOptions projection;
};

/// For each (K, T): extend the base mesh, run the scheme from pointwise
/// initial samples with zero initial velocity, and record the maximum nodal
/// error against the sine-series reference over all nodes including the
/// (zero) boundaries.  With fixed_steps set, M is that value for every T and
/// the tau rule is ignored; otherwise M = ceil(T/tau_rule) and tau = T/M.
ErrorTable error_table(const Mesh& base, std::span<const int> multiplicities,
                       const TauRule& tau_rule, std::span<const double> horizons,
                       const ExperimentSetup& setup);

/// Observed exponential growth rate ln(e2/e1)/(T2 - T1); errors must be
/// positive and finite, T2 > T1.
double practical_rate(double e_at_t1, double e_at_t2, double t1, double t2);

/// Uniform-mesh step restriction a^2 tau^2 / h^2 <= 1 - eps0^2, together with
/// the sharper eigenvalue form (1/6) a^2 tau^2 lambda_max <= 1 - eps0^2.
struct CflReport {
  ConditionCheck ratio_form, eigenvalue_form;
  bool pass = false;
};
CflReport check_cfl_uniform(const Mesh& mesh, double a, double tau, double eps0_sq);

/// Family-mesh necessary condition for a base with complex eigenvalues:
/// a^2 |Im lambda0| (h0/h)^2 tau <= (9/2) kappa with h = h0/K, i.e. the left
/// side is a^2 |Im lambda0| K^2 tau.  Also reports the implied step bound
/// tau_star and its ratio to h_min^2 of the family mesh.  Vacuous when the
/// base spectrum is all-real.
struct FamilyConditionReport {
  bool vacuous = false;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = true;
  double margin = 0.0;
  double tau_star = 0.0;
  double tau_star_over_hmin_sq = 0.0;
};
FamilyConditionReport check_family_condition(const Mesh& base, const Spectrum& base_spectrum,
                                             int multiplicity, double tau, double kappa,
                                             double a);

/// One examined mesh of the brute-force search, X = 1, steps over the sum.
struct CandidateReport {
  std::vector<long long> steps;
  long long denominator = 0;
  SpectrumClass classification = SpectrumClass::AllReal;
  std::complex<double> dominant;
  double growth_rate = 0.0;      ///< of the dominant eigenvalue, a = 1
  double oracle_mismatch = 0.0;  ///< max relative eigenvalue disagreement
};
CandidateReport evaluate_candidate(std::span<const long long> steps, bool oracle_check = true);

struct SearchOptions {
  int min_intervals = 2;
  int max_intervals = 6;
  std::vector<long long> alphabet = {1, 2, 3, 4, 5, 6};
  long long budget = 200000;  ///< max candidates examined
  bool oracle_check = true;   ///< verify every hit against the charpoly oracle
};
struct SearchOutcome {
  std::vector<CandidateReport> hits;  ///< complex-spectrum candidates only
  long long examined = 0;
  bool complete = true;  ///< false when the budget ran out
};

/// Enumerate integer-step meshes on [0, 1]: interval counts ascending, step
/// vectors in lexicographic order over the alphabet, skipping vectors with a
/// common factor and keeping only the lexicographically smaller of each
/// vector/mirror pair.  Emits every complex-spectrum hit (optionally through
/// on_hit as soon as it is found).
SearchOutcome brute_force_search(const SearchOptions& options,
                                 const std::function<void(const CandidateReport&)>& on_hit = {});

} // namespace nlab
