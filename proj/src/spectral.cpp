#include "numerovlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "numerovlab/csv.hpp"
#include "numerovlab/operators.hpp"
#include "numerovlab/tridiagonal.hpp"

namespace nlab {

namespace {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Complex tridiagonal LU with partial pivoting (row swaps fill a second
// superdiagonal).  Used for the inverse-iteration solves, where the shifted
// pencil matrix is near-singular by design: zero pivots are clamped instead
// of rejected, which steers the solve toward the null direction.
class PivotedComplexTridiagonal {
public:
  PivotedComplexTridiagonal(std::vector<cplx> sub, std::vector<cplx> diag, std::vector<cplx> super)
      : dl_(std::move(sub)), d_(std::move(diag)), du_(std::move(super)) {
    const std::size_t n = d_.size();
    du2_.assign(n >= 2 ? n - 2 : 0, cplx(0));
    swapped_.assign(n >= 1 ? n - 1 : 0, false);
    double scale = 0.0;
    for (const cplx& v : d_) scale = std::max(scale, std::abs(v));
    for (const cplx& v : dl_) scale = std::max(scale, std::abs(v));
    for (const cplx& v : du_) scale = std::max(scale, std::abs(v));
    const double tiny = std::max(scale, 1.0) * 1e-300;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(d_[i]) >= std::abs(dl_[i])) {
        if (std::abs(d_[i]) == 0.0) d_[i] = tiny;
        const cplx fact = dl_[i] / d_[i];
        dl_[i] = fact;
        d_[i + 1] -= fact * du_[i];
      } else {
        const cplx fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const cplx temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i + 2 < n) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        swapped_[i] = true;
      }
    }
    if (n > 0 && std::abs(d_[n - 1]) == 0.0) d_[n - 1] = tiny;
  }

  void solve_in_place(std::vector<cplx>& b) const {
    const std::size_t n = d_.size();
    if (n == 1) {
      b[0] /= d_[0];
      return;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swapped_[i]) {
        b[i + 1] -= dl_[i] * b[i];
      } else {
        std::swap(b[i], b[i + 1]);
        b[i + 1] -= dl_[i] * b[i];
      }
    }
    b[n - 1] /= d_[n - 1];
    if (n >= 2) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
    for (std::size_t i = n - 2; i-- > 0;)
      b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
  }

private:
  std::vector<cplx> dl_, d_, du_, du2_;
  std::vector<bool> swapped_;
};

// Pencil residual ||lap e + lambda avg e||_l2h for a unit-l2h vector.
double pencil_residual(const TridiagonalOperator& lap, const TridiagonalOperator& avg,
                       const Mesh& mesh, cplx lambda, const std::vector<cplx>& e) {
  std::vector<cplx> r = lap.apply(std::span<const cplx>(e));
  const std::vector<cplx> se = avg.apply(std::span<const cplx>(e));
  for (std::size_t j = 0; j < r.size(); ++j) r[j] += lambda * se[j];
  return l2h_norm(std::span<const cplx>(r), mesh);
}

// Unit l2h norm, largest-magnitude entry rotated to the positive real axis.
void normalize_vector(std::vector<cplx>& e, const Mesh& mesh) {
  const double nrm = l2h_norm(std::span<const cplx>(e), mesh);
  if (!(nrm > 0.0)) throw numerical_error("eigenvector recovery produced a zero vector");
  std::size_t lead = 0;
  double best = 0.0;
  for (std::size_t j = 0; j < e.size(); ++j) {
    const double m = std::abs(e[j]);
    if (m > best * (1.0 + 1e-12)) {
      best = m;
      lead = j;
    }
  }
  const cplx phase = std::conj(e[lead]) / std::abs(e[lead]);
  for (cplx& v : e) v *= phase / nrm;
}

// Inverse iteration on the pencil at a computed eigenvalue.  The start vector
// is a fixed-seed pseudorandom draw so results are identical across runs; on
// a stalled residual the draw is reseeded and iteration continues.
std::vector<cplx> pencil_eigenvector(const TridiagonalOperator& lap, const TridiagonalOperator& avg,
                                     const Mesh& mesh, cplx lambda, double* residual_out) {
  const std::size_t n = lap.size();
  const double target = 1e-9 * std::max(1.0, std::abs(lambda));
  std::vector<cplx> best;
  double best_res = std::numeric_limits<double>::infinity();
  for (unsigned attempt = 0; attempt < 4 && best_res > target; ++attempt) {
    std::mt19937 rng(0x5eed1234u + 977u * attempt);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<cplx> x(n);
    for (cplx& v : x) v = cplx(unit(rng), unit(rng));

    std::vector<cplx> sub(n - 1), diag(n), super(n - 1);
    for (std::size_t i = 0; i < n; ++i) diag[i] = lap.diag(i) + lambda * avg.diag(i);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      sub[i] = lap.sub(i) + lambda * avg.sub(i);
      super[i] = lap.super(i) + lambda * avg.super(i);
    }
    const PivotedComplexTridiagonal lu(std::move(sub), std::move(diag), std::move(super));

    for (int it = 0; it < 8; ++it) {
      std::vector<cplx> rhs = avg.apply(std::span<const cplx>(x));
      lu.solve_in_place(rhs);
      double mx = 0.0;
      for (const cplx& v : rhs) mx = std::max(mx, std::abs(v));
      if (!(mx > 0.0) || !std::isfinite(mx)) break;
      for (cplx& v : rhs) v /= mx;
      x = std::move(rhs);
      std::vector<cplx> e = x;
      normalize_vector(e, mesh);
      const double res = pencil_residual(lap, avg, mesh, lambda, e);
      if (res < best_res) {
        best_res = res;
        best = std::move(e);
      }
      if (best_res <= target) break;
    }
  }
  if (best.empty())
    throw numerical_error("inverse iteration failed to produce an eigenvector");
  *residual_out = best_res;
  return best;
}

} // namespace

Spectrum generalized_spectrum(const Mesh& mesh) {
  const int n = mesh.interior_count();
  const TridiagonalOperator lap = laplacian(mesh);
  const TridiagonalOperator avg = numerov_average(mesh);

  // Reduction M = -avg^{-1} lap, one tridiagonal solve per column of lap.
  Eigen::MatrixXd M(n, n);
  {
    std::vector<double> col(n);
    TridiagonalSolver avg_solver = [&]() -> TridiagonalSolver {
      try {
        return TridiagonalSolver(avg);
      } catch (const numerical_error& e) {
        throw numerical_error(std::string("mesh rejected: numerov averaging operator is "
                                          "singular (") +
                              e.what() + ")");
      }
    }();
    for (int j = 0; j < n; ++j) {
      std::fill(col.begin(), col.end(), 0.0);
      if (j > 0) col[j - 1] = lap.super(j - 1);
      col[j] = lap.diag(j);
      if (j + 1 < n) col[j + 1] = lap.sub(j);
      const std::vector<double> x = avg_solver.solve(std::span<const double>(col));
      for (int i = 0; i < n; ++i) M(i, j) = -x[i];
    }
  }

  Eigen::EigenSolver<Eigen::MatrixXd> es;
  es.setMaxIterations(100 * n);
  es.compute(M, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw numerical_error("QR iteration did not converge within 100*(N-1) sweeps on this mesh");

  std::vector<cplx> lambdas(n);
  for (int i = 0; i < n; ++i) lambdas[i] = es.eigenvalues()[i];

  // Symmetrize conjugate pairs: match each upper-half eigenvalue with its
  // closest lower-half conjugate and average the two.
  {
    std::vector<int> upper, lower;
    for (int i = 0; i < n; ++i) {
      if (lambdas[i].imag() > 0.0) upper.push_back(i);
      else if (lambdas[i].imag() < 0.0) lower.push_back(i);
    }
    std::vector<bool> used(lower.size(), false);
    for (int iu : upper) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t pick = lower.size();
      for (std::size_t k = 0; k < lower.size(); ++k) {
        if (used[k]) continue;
        const double d = std::abs(lambdas[iu] - std::conj(lambdas[lower[k]]));
        if (d < best) {
          best = d;
          pick = k;
        }
      }
      if (pick == lower.size()) continue;
      used[pick] = true;
      const cplx mean = 0.5 * (lambdas[iu] + std::conj(lambdas[lower[pick]]));
      lambdas[iu] = mean;
      lambdas[lower[pick]] = std::conj(mean);
    }
  }

  std::sort(lambdas.begin(), lambdas.end(), [](const cplx& x, const cplx& y) {
    const double ax = std::abs(x), ay = std::abs(y);
    if (ax != ay) return ax > ay;
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });

  Spectrum spec;
  spec.pairs.resize(n);
  for (int i = 0; i < n; ++i) {
    EigenPair& p = spec.pairs[i];
    p.lambda = lambdas[i];
    if (lambdas[i].imag() < 0.0 && i > 0 && spec.pairs[i - 1].lambda == std::conj(lambdas[i])) {
      // Lower half of a symmetrized pair: conjugate the partner's vector.
      p.vector.resize(spec.pairs[i - 1].vector.size());
      std::transform(spec.pairs[i - 1].vector.begin(), spec.pairs[i - 1].vector.end(),
                     p.vector.begin(), [](const cplx& v) { return std::conj(v); });
      p.residual = pencil_residual(lap, avg, mesh, p.lambda, p.vector);
    } else {
      p.vector = pencil_eigenvector(lap, avg, mesh, p.lambda, &p.residual);
    }
  }

  const double top = std::abs(spec.pairs.front().lambda);
  for (int i = 0; i < n; ++i)
    if (std::abs(spec.pairs[i].lambda) >= top * (1.0 - 1e-12)) spec.dominant.push_back(i);
  spec.classification = classify(spec);
  return spec;
}

SpectrumClass classify(const Spectrum& spectrum, double tol_imag) {
  for (const EigenPair& p : spectrum.pairs)
    if (std::abs(p.lambda.imag()) > tol_imag * std::max(1.0, std::abs(p.lambda.real())))
      return SpectrumClass::ComplexPresent;
  return SpectrumClass::AllReal;
}

std::vector<cplx> charpoly_roots_oracle(const Mesh& mesh) {
  if (mesh.intervals() > 16)
    throw std::invalid_argument("charpoly oracle is desk-scale only (N <= 16)");
  const int n = mesh.interior_count();
  const TridiagonalOperator lap = laplacian(mesh);
  const TridiagonalOperator avg = numerov_average(mesh);

  // p(z) = det(-lap - z*avg) via the three-term determinant recurrence;
  // p'(z) by differentiating the recurrence alongside.
  const auto p_and_dp = [&](cplx z) {
    cplx pm2 = 1.0, dpm2 = 0.0;                       // D_{-1}
    cplx pm1 = -lap.diag(0) - z * avg.diag(0);        // D_0
    cplx dpm1 = -avg.diag(0);
    for (int k = 1; k < n; ++k) {
      const cplx dk = -lap.diag(k) - z * avg.diag(k);
      const cplx ddk = -avg.diag(k);
      const cplx off = (-lap.sub(k - 1) - z * avg.sub(k - 1)) *
                       (-lap.super(k - 1) - z * avg.super(k - 1));
      const cplx doff = -avg.sub(k - 1) * (-lap.super(k - 1) - z * avg.super(k - 1)) +
                        (-lap.sub(k - 1) - z * avg.sub(k - 1)) * -avg.super(k - 1);
      const cplx pk = dk * pm1 - off * pm2;
      const cplx dpk = ddk * pm1 + dk * dpm1 - doff * pm2 - off * dpm2;
      pm2 = pm1;
      dpm2 = dpm1;
      pm1 = pk;
      dpm1 = dpk;
    }
    return std::pair<cplx, cplx>(pm1, dpm1);
  };

  // Real determinants of -lap and avg for the starting radius
  // |det(-lap)/det(avg)|^{1/n} (geometric mean of the root moduli).
  const auto real_det = [n](const TridiagonalOperator& A, double sign) {
    double pm2 = 1.0, pm1 = sign * A.diag(0);
    for (int k = 1; k < n; ++k) {
      const double pk = sign * A.diag(k) * pm1 - A.sub(k - 1) * A.super(k - 1) * pm2;
      pm2 = pm1;
      pm1 = pk;
    }
    return pm1;
  };
  const double det_neg_lap = real_det(lap, -1.0);
  const double det_avg = real_det(avg, 1.0);
  if (det_avg == 0.0) throw numerical_error("oracle: averaging operator is singular");
  const double radius = std::pow(std::abs(det_neg_lap / det_avg), 1.0 / n);

  std::vector<cplx> z(n);
  for (int j = 0; j < n; ++j) {
    const double angle = 2.0 * std::numbers::pi * (j + 0.35) / n;
    z[j] = radius * cplx(std::cos(angle), std::sin(angle));
  }

  // Aberth–Ehrlich simultaneous iteration.
  bool converged = false;
  for (int sweep = 0; sweep < 500 && !converged; ++sweep) {
    converged = true;
    for (int j = 0; j < n; ++j) {
      const auto [pv, dpv] = p_and_dp(z[j]);
      if (pv == cplx(0.0)) continue;
      const cplx w = pv / dpv;
      cplx repel = 0.0;
      for (int k = 0; k < n; ++k)
        if (k != j) repel += 1.0 / (z[j] - z[k]);
      const cplx delta = w / (1.0 - w * repel);
      z[j] -= delta;
      if (std::abs(delta) > 1e-13 * std::max(1.0, std::abs(z[j]))) converged = false;
    }
  }
  if (!converged) throw numerical_error("oracle root iteration did not converge in 500 sweeps");
  return z;
}

ScalingCheck verify_scaling(const Mesh& base, int multiplicity) {
  if (multiplicity < 1) throw std::invalid_argument("verify_scaling: multiplicity must be >= 1");
  const Spectrum base_spec = generalized_spectrum(base);
  const Mesh extended = extend_mesh(base, multiplicity);
  const Spectrum ext_spec = generalized_spectrum(extended);
  const TridiagonalOperator lap = laplacian(extended);
  const TridiagonalOperator avg = numerov_average(extended);
  const double k2 = static_cast<double>(multiplicity) * multiplicity;

  ScalingCheck out;
  out.rows.reserve(base_spec.pairs.size());
  for (std::size_t i = 0; i < base_spec.pairs.size(); ++i) {
    const EigenPair& bp = base_spec.pairs[i];
    const cplx target = bp.lambda * k2;
    ScalingRow row;
    row.base_lambda = bp.lambda;
    double best = std::numeric_limits<double>::infinity();
    for (const EigenPair& ep : ext_spec.pairs) {
      const double d = std::abs(ep.lambda - target);
      if (d < best) {
        best = d;
        row.matched_lambda = ep.lambda;
      }
    }
    row.eigenvalue_defect = best / std::abs(target);

    std::vector<cplx> ext_vec =
        extend_function(std::span<const cplx>(bp.vector), base, multiplicity);
    const double nrm = l2h_norm(std::span<const cplx>(ext_vec), extended);
    for (cplx& v : ext_vec) v /= nrm;
    row.extension_residual =
        pencil_residual(lap, avg, extended, target, ext_vec) / std::abs(target);

    out.max_eigenvalue_defect = std::max(out.max_eigenvalue_defect, row.eigenvalue_defect);
    out.max_extension_residual = std::max(out.max_extension_residual, row.extension_residual);
    if (i == base_spec.dominant.front())
      out.dominant_extension_residual = row.extension_residual;
    out.rows.push_back(std::move(row));
  }
  return out;
}

double uniform_max_laplacian_eigenvalue(const Mesh& mesh) {
  if (!mesh.is_uniform())
    throw std::invalid_argument("closed-form eigenvalue needs a uniform mesh");
  const int n = mesh.intervals();
  const double h = to_double(mesh.mean_step());
  const double s = std::sin(std::numbers::pi * (n - 1) / (2.0 * n));
  return 4.0 / (h * h) * s * s;
}

double uniform_max_eigenvalue(const Mesh& mesh) {
  const double lam = uniform_max_laplacian_eigenvalue(mesh);
  const double h = to_double(mesh.mean_step());
  return lam / (1.0 - h * h / 12.0 * lam);
}

void write_spectrum_csv(const Spectrum& spectrum, std::ostream& os) {
  os << "index,re,im,residual\n";
  for (std::size_t i = 0; i < spectrum.pairs.size(); ++i) {
    const EigenPair& p = spectrum.pairs[i];
    os << i << ',' << format_double(p.lambda.real()) << ',' << format_double(p.lambda.imag())
       << ',' << format_double(p.residual) << '\n';
  }
}

} // namespace nlab
