#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "numerovlab/rational.hpp"

namespace nlab {

/// 1D mesh on [0, X] with Dirichlet endpoints.  Steps are exact rationals —
/// integer numerators over one common denominator — so that refinement
/// families derived from a base mesh are reproducible bit-for-bit.  Real
/// renderings of steps and nodes are rounded from the rationals once, at
/// construction, and cached; all double-precision operator assembly starts
/// from those.
class Mesh {
public:
  /// All N steps equal to X/N.
  static Mesh uniform(const Rational& X, int intervals);

  /// Mesh with steps numerators[j]/denominator.  The step sum must equal X
  /// exactly; a mismatch is rejected with the rational defect in the message.
  static Mesh from_steps(std::vector<long long> numerators, long long denominator,
                         const Rational& X);

  int intervals() const noexcept { return static_cast<int>(numerators_.size()); } // N
  int interior_count() const noexcept { return intervals() - 1; }                 // N-1
  const Rational& length() const noexcept { return length_; }                     // X

  const std::vector<long long>& step_numerators() const noexcept { return numerators_; }
  long long step_denominator() const noexcept { return denominator_; }

  Rational step(int j) const;  ///< h_j, 1-based, j in 1..N
  Rational node(int j) const;  ///< x_j, 0-based, j in 0..N
  Rational mean_step() const { return length_ / intervals(); }
  Rational min_step() const;
  Rational max_step() const;
  bool is_uniform() const;

  /// Once-rounded real views: steps h_1..h_N, nodes x_0..x_N, and the
  /// half-steps hhat_j = (h_j + h_{j+1})/2 at interior nodes j = 1..N-1.
  const std::vector<double>& steps() const noexcept { return steps_real_; }
  const std::vector<double>& nodes() const noexcept { return nodes_real_; }
  const std::vector<double>& half_steps() const noexcept { return half_steps_real_; }

  /// Exact equality of geometry: same X and the same step rationals
  /// (representations may differ, e.g. 2/4 vs 1/2).
  bool operator==(const Mesh& other) const;

  /// Text form, two lines: "X <rational>" and
  /// "steps <n1> <n2> ... / <denominator>".  parse() round-trips exactly.
  std::string serialize() const;
  static Mesh parse(std::string_view text);
  static Mesh load(const std::filesystem::path& file);
  void save(const std::filesystem::path& file) const;

private:
  Mesh(std::vector<long long> numerators, long long denominator, Rational X);

  std::vector<long long> numerators_;
  long long denominator_ = 1;
  Rational length_{1};
  std::vector<double> steps_real_, nodes_real_, half_steps_real_;
};

/// Tile [0, X] with K scaled copies of the base mesh, even-indexed blocks in
/// step order and odd-indexed blocks mirrored, all steps divided by K.  The
/// result has N0*K intervals and mean step h0/K; K = 1 returns the base.
Mesh extend_mesh(const Mesh& base, int multiplicity);

/// Companion extension of interior-node data: block b copies w (b even) or
/// the index-reversed negation of w (b odd).  Input w lives on the base
/// interior nodes 1..N0-1 (boundary values implicitly zero); the result lives
/// on the interior nodes of extend_mesh(base, K) and vanishes at every block
/// boundary x = 2kX/K.
template <class T>
std::vector<T> extend_function(std::span<const T> w, const Mesh& base, int multiplicity) {
  const int n0 = base.intervals();
  if (static_cast<int>(w.size()) != n0 - 1)
    throw std::invalid_argument("extend_function: expected " + std::to_string(n0 - 1) +
                                " interior values, got " + std::to_string(w.size()));
  if (multiplicity < 1) throw std::invalid_argument("extend_function: multiplicity must be >= 1");
  const auto at = [&](int l) -> T { return (l == 0 || l == n0) ? T{} : w[l - 1]; };
  std::vector<T> out(static_cast<std::size_t>(n0) * multiplicity - 1);
  for (std::size_t j = 1; j < out.size() + 1; ++j) {
    const int b = static_cast<int>(j) / n0;
    const int l = static_cast<int>(j) % n0;
    out[j - 1] = (b % 2 == 0) ? at(l) : static_cast<T>(-at(n0 - l));
  }
  return out;
}

/// Range of consecutive step ratios h_{j+1}/h_j, with an exact-rational test
/// against the band [2/(sqrt5+1), (sqrt5+1)/2] (squared comparisons, so no
/// irrational arithmetic is involved).
struct StepRatioRange {
  Rational min_ratio;
  Rational max_ratio;
  bool within_band = true;
};
StepRatioRange step_ratio_range(const Mesh& mesh);

} // namespace nlab
