#include "numerovlab/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "numerovlab/csv.hpp"

namespace nlab {

TridiagonalOperator::TridiagonalOperator(std::vector<double> sub, std::vector<double> diag,
                                         std::vector<double> super)
    : sub_(std::move(sub)), diag_(std::move(diag)), super_(std::move(super)) {
  if (diag_.empty()) throw std::invalid_argument("tridiagonal operator must be nonempty");
  if (sub_.size() != diag_.size() - 1 || super_.size() != diag_.size() - 1)
    throw std::invalid_argument("tridiagonal operator: off-diagonals must have length n-1");
}

TridiagonalOperator TridiagonalOperator::identity(std::size_t n) {
  if (n == 0) throw std::invalid_argument("tridiagonal operator must be nonempty");
  return TridiagonalOperator(std::vector<double>(n - 1, 0.0), std::vector<double>(n, 1.0),
                             std::vector<double>(n - 1, 0.0));
}

double TridiagonalOperator::inf_norm() const {
  double best = 0.0;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(diag_[i]);
    if (i > 0) row += std::abs(sub_[i - 1]);
    if (i + 1 < n) row += std::abs(super_[i]);
    best = std::max(best, row);
  }
  return best;
}

void TridiagonalOperator::dump_csv(std::ostream& os) const {
  os << "row,sub,diag,super\n";
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    os << (i + 1) << ',' << format_double(i > 0 ? sub_[i - 1] : 0.0) << ','
       << format_double(diag_[i]) << ',' << format_double(i + 1 < n ? super_[i] : 0.0) << '\n';
  }
}

TridiagonalOperator linear_combination(double ca, const TridiagonalOperator& A, double cb,
                                       const TridiagonalOperator& B) {
  const std::size_t n = A.size();
  if (B.size() != n) throw std::invalid_argument("linear_combination: dimension mismatch");
  std::vector<double> sub(n - 1), diag(n), super(n - 1);
  for (std::size_t i = 0; i < n; ++i) diag[i] = ca * A.diag(i) + cb * B.diag(i);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    sub[i] = ca * A.sub(i) + cb * B.sub(i);
    super[i] = ca * A.super(i) + cb * B.super(i);
  }
  return TridiagonalOperator(std::move(sub), std::move(diag), std::move(super));
}

TridiagonalSolver::TridiagonalSolver(const TridiagonalOperator& A) {
  const std::size_t n = A.size();
  multipliers_.resize(n - 1);
  upper_diag_.resize(n);
  upper_super_.resize(n - 1);
  const double scale = A.inf_norm();
  const double floor = 1e-13 * scale;
  upper_diag_[0] = A.diag(0);
  for (std::size_t i = 0; i + 1 < n; ++i) upper_super_[i] = A.super(i);
  for (std::size_t i = 1; i < n; ++i) {
    const double pivot = upper_diag_[i - 1];
    if (!(std::abs(pivot) > floor))
      throw numerical_error("singular tridiagonal system: pivot " + std::to_string(pivot) +
                            " at row " + std::to_string(i) + " (threshold 1e-13 relative)");
    multipliers_[i - 1] = A.sub(i - 1) / pivot;
    upper_diag_[i] = A.diag(i) - multipliers_[i - 1] * A.super(i - 1);
  }
  if (!(std::abs(upper_diag_[n - 1]) > floor))
    throw numerical_error("singular tridiagonal system: pivot " +
                          std::to_string(upper_diag_[n - 1]) + " at row " + std::to_string(n) +
                          " (threshold 1e-13 relative)");
}

} // namespace nlab
