#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "numerovlab/mesh.hpp"
#include "numerovlab/operators.hpp"
#include "numerovlab/tridiagonal.hpp"

namespace nlab {

/// Time discretization: M steps of size tau, horizon T = M*tau, wave speed a,
/// implicitness weight sigma (1/12 gives the fourth-order compact scheme).
struct SchemeConfig {
  double a = 1.0;
  double tau = 0.0;
  long long steps = 0;  // M
  double sigma = 1.0 / 12.0;

  double horizon() const { return static_cast<double>(steps) * tau; }
};

/// Two adjacent time levels of interior-node values (boundaries are
/// identically zero and not stored).
template <class T>
struct WaveState {
  std::vector<T> prev, curr;
  long long level = 0;  // curr is v^level
};

struct NormHistoryRow {
  long long level = 0;
  double time = 0.0;
  double l2h = 0.0;
  double dirichlet = 0.0;
};

template <class T>
struct Snapshot {
  long long level = 0;
  double time = 0.0;
  std::vector<T> values;
};

template <class T>
struct RunResult {
  std::vector<Snapshot<T>> snapshots;
  std::vector<NormHistoryRow> norm_history;
  WaveState<T> final_state;
  std::vector<T> velocity_load;         ///< the load vector actually used
  std::vector<std::vector<T>> levels;   ///< all levels v^0..v^M when kept
  bool overflowed = false;
  long long completed_steps = 0;
};

struct RunOptions {
  std::vector<double> snapshot_times;  ///< must be integer multiples of tau
  bool keep_levels = false;
  bool record_norms = true;
  double overflow_limit = 1e300;  ///< max-norm beyond this stops the run
};

/// Three-level implicit scheme
///   (avg - sigma tau^2 a^2 lap) (v^{m+1} - 2v^m + v^{m-1}) = tau^2 a^2 lap v^m
/// started from
///   (avg - sigma tau^2 a^2 lap) (v^1 - v^0)/tau = load + (tau/2) a^2 lap v^0,
/// where the load is  velocity_load(u1) = (avg + (tau^2 a^2 / 12) lap) u1
/// (the 1/12 is fixed for every sigma).  The step operator is assembled and
/// factored once per (mesh, config); runs with different data reuse it and
/// are safe to execute concurrently.
class CompactWaveScheme {
public:
  CompactWaveScheme(const Mesh& mesh, const SchemeConfig& config);

  const Mesh& mesh() const noexcept { return *mesh_; }
  const SchemeConfig& config() const noexcept { return config_; }
  const TridiagonalOperator& laplacian_op() const noexcept { return lap_; }
  const TridiagonalOperator& average_op() const noexcept { return avg_; }
  const TridiagonalOperator& step_op() const noexcept { return step_; }

  template <class T>
  std::vector<T> velocity_load(std::span<const T> u1) const {
    check_size(u1.size());
    std::vector<T> out = avg_.apply(u1);
    const double c = config_.tau * config_.tau * config_.a * config_.a / 12.0;
    std::vector<T> lap_u = lap_.apply(u1);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += c * lap_u[j];
    return out;
  }

  template <class T>
  WaveState<T> first_step(std::span<const T> v0, std::span<const T> load) const {
    check_size(v0.size());
    check_size(load.size());
    std::vector<T> rhs = lap_.apply(v0);
    const double c = 0.5 * config_.tau * config_.a * config_.a;
    for (std::size_t j = 0; j < rhs.size(); ++j) rhs[j] = load[j] + c * rhs[j];
    solver_.solve_in_place(std::span<T>(rhs));  // rhs now holds (delta_t v)^0
    WaveState<T> st;
    st.prev.assign(v0.begin(), v0.end());
    st.curr.resize(v0.size());
    for (std::size_t j = 0; j < v0.size(); ++j) st.curr[j] = v0[j] + config_.tau * rhs[j];
    st.level = 1;
    return st;
  }

  template <class T>
  void advance(WaveState<T>& st) const {
    check_size(st.curr.size());
    check_size(st.prev.size());
    std::vector<T> d = lap_.apply(std::span<const T>(st.curr));
    const double c = config_.tau * config_.tau * config_.a * config_.a;
    for (T& v : d) v *= c;
    solver_.solve_in_place(std::span<T>(d));
    for (std::size_t j = 0; j < d.size(); ++j) {
      const T next = d[j] + 2.0 * st.curr[j] - st.prev[j];
      st.prev[j] = st.curr[j];
      st.curr[j] = next;
    }
    ++st.level;
  }

  template <class T>
  RunResult<T> run(std::span<const T> v0, std::span<const T> u1,
                   const RunOptions& options = {}) const {
    const std::vector<T> load = velocity_load(u1);
    return run_with_load(v0, std::span<const T>(load), options);
  }

  /// Run with a precomputed load vector in place of velocity_load(u1).
  template <class T>
  RunResult<T> run_with_load(std::span<const T> v0, std::span<const T> load,
                             const RunOptions& options = {}) const;

private:
  void check_size(std::size_t got) const;
  std::vector<long long> snapshot_levels(const RunOptions& options) const;

  const Mesh* mesh_;
  SchemeConfig config_;
  TridiagonalOperator lap_, avg_, step_;
  TridiagonalSolver solver_;
};

template <class T>
RunResult<T> CompactWaveScheme::run_with_load(std::span<const T> v0, std::span<const T> load,
                                              const RunOptions& options) const {
  check_size(v0.size());
  check_size(load.size());
  const std::vector<long long> snap_levels = snapshot_levels(options);

  RunResult<T> result;
  result.velocity_load.assign(load.begin(), load.end());
  auto linf = [](const std::vector<T>& v) {
    double m = 0.0;
    for (const T& x : v) m = std::max(m, std::abs(x));
    return m;
  };
  auto record = [&](long long level, const std::vector<T>& values) {
    const double t = static_cast<double>(level) * config_.tau;
    if (options.record_norms)
      result.norm_history.push_back({level, t, l2h_norm(std::span<const T>(values), *mesh_),
                                     dirichlet_norm(std::span<const T>(values), *mesh_)});
    for (std::size_t s = 0; s < snap_levels.size(); ++s)
      if (snap_levels[s] == level)
        result.snapshots.push_back({level, options.snapshot_times[s], values});
    if (options.keep_levels) result.levels.push_back(values);
  };

  WaveState<T> st;
  st.prev.assign(v0.begin(), v0.end());
  st.curr.assign(v0.begin(), v0.end());
  st.level = 0;
  record(0, st.curr);
  if (config_.steps >= 1 && !result.overflowed) {
    st = first_step(v0, load);
    record(1, st.curr);
    result.overflowed = linf(st.curr) > options.overflow_limit;
    while (st.level < config_.steps && !result.overflowed) {
      advance(st);
      record(st.level, st.curr);
      result.overflowed = linf(st.curr) > options.overflow_limit;
    }
  }
  result.completed_steps = st.level;
  result.final_state = std::move(st);
  return result;
}

/// Per-step energy functionals of a completed run (requires keep_levels):
/// at level m < M the averaged-gradient term a^2 || (v^m + v^{m+1})/2 ||^2 in
/// the dirichlet seminorm and, when the Numerov form is symmetric positive,
/// the strong left side eps0^2 ||(v^{m+1}-v^m)/tau||_avg^2 + that term; the
/// weak left side eps0 ||v^m||_avg at every level.  Right sides are the
/// run-independent constants from the two stability bounds.
struct EnergyRow {
  long long level = 0;
  double time = 0.0;
  double avg_gradient_sq = 0.0;
  std::optional<double> strong_lhs;
  std::optional<double> weak_lhs;
};
struct EnergyHistory {
  std::vector<EnergyRow> rows;
  std::optional<double> strong_rhs;
  std::optional<double> weak_rhs;
  bool numerov_norms_available = false;
};
EnergyHistory energy_history(const RunResult<double>& result, const Mesh& mesh,
                             const SchemeConfig& config, double eps0_sq);

} // namespace nlab
