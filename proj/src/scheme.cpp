#include "numerovlab/scheme.hpp"

#include <stdexcept>
#include <string>

namespace nlab {

CompactWaveScheme::CompactWaveScheme(const Mesh& mesh, const SchemeConfig& config)
    : mesh_(&mesh),
      config_(config),
      lap_(laplacian(mesh)),
      avg_(numerov_average(mesh)),
      step_(step_operator(mesh, config.tau, config.a, config.sigma)),
      solver_(step_) {
  if (config_.steps < 0) throw std::invalid_argument("scheme: step count must be nonnegative");
  if (!std::isfinite(config_.sigma)) throw std::invalid_argument("scheme: sigma must be finite");
}

void CompactWaveScheme::check_size(std::size_t got) const {
  const std::size_t want = static_cast<std::size_t>(mesh_->interior_count());
  if (got != want)
    throw std::invalid_argument("scheme: expected " + std::to_string(want) +
                                " interior values, got " + std::to_string(got));
}

std::vector<long long> CompactWaveScheme::snapshot_levels(const RunOptions& options) const {
  std::vector<long long> levels;
  levels.reserve(options.snapshot_times.size());
  for (double t : options.snapshot_times) {
    const long long m = std::llround(t / config_.tau);
    if (m < 0 || m > config_.steps ||
        std::abs(static_cast<double>(m) * config_.tau - t) > 1e-9 * std::max(1.0, std::abs(t)))
      throw std::invalid_argument("snapshot time " + std::to_string(t) +
                                  " is not a multiple of tau within the run horizon");
    levels.push_back(m);
  }
  return levels;
}

EnergyHistory energy_history(const RunResult<double>& result, const Mesh& mesh,
                             const SchemeConfig& config, double eps0_sq) {
  if (result.levels.empty())
    throw std::invalid_argument("energy_history needs a run recorded with keep_levels");
  if (!(eps0_sq > 0.0) || !(eps0_sq < 1.0))
    throw std::invalid_argument("energy_history: eps0^2 must lie in (0, 1)");

  EnergyHistory out;
  out.numerov_norms_available = numerov_form_symmetric_positive(mesh);
  const double asq = config.a * config.a;
  const double eps0 = std::sqrt(eps0_sq);

  if (out.numerov_norms_available) {
    const NormBundle v0n = norms(std::span<const double>(result.levels.front()), mesh);
    const NormBundle loadn = norms(std::span<const double>(result.velocity_load), mesh);
    out.strong_rhs =
        asq * v0n.dirichlet * v0n.dirichlet + (*loadn.numerov) * (*loadn.numerov) / eps0_sq;
    out.weak_rhs = *v0n.numerov + 2.0 / config.a * loadn.neg_laplacian_inverse;
  }

  const std::size_t count = result.levels.size();
  out.rows.reserve(count);
  std::vector<double> work(result.levels.front().size());
  for (std::size_t m = 0; m < count; ++m) {
    EnergyRow row;
    row.level = static_cast<long long>(m);
    row.time = static_cast<double>(m) * config.tau;
    const std::vector<double>& vm = result.levels[m];
    std::optional<double> dt_avg_sq;
    if (m + 1 < count) {
      const std::vector<double>& vp = result.levels[m + 1];
      for (std::size_t j = 0; j < work.size(); ++j) work[j] = 0.5 * (vm[j] + vp[j]);
      const double g = dirichlet_norm(std::span<const double>(work), mesh);
      row.avg_gradient_sq = asq * g * g;
      if (out.numerov_norms_available) {
        for (std::size_t j = 0; j < work.size(); ++j) work[j] = (vp[j] - vm[j]) / config.tau;
        const NormBundle dt = norms(std::span<const double>(work), mesh);
        dt_avg_sq = (*dt.numerov) * (*dt.numerov);
        row.strong_lhs = eps0_sq * *dt_avg_sq + row.avg_gradient_sq;
      }
    }
    if (out.numerov_norms_available) {
      const NormBundle vn = norms(std::span<const double>(vm), mesh);
      row.weak_lhs = eps0 * *vn.numerov;
    }
    out.rows.push_back(row);
  }
  return out;
}

} // namespace nlab
