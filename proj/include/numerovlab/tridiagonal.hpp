#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "numerovlab/errors.hpp"

namespace nlab {

/// Real tridiagonal operator on interior-node vectors.  Immutable once built;
/// apply() works on real or complex data.
class TridiagonalOperator {
public:
  TridiagonalOperator(std::vector<double> sub, std::vector<double> diag,
                      std::vector<double> super);
  static TridiagonalOperator identity(std::size_t n);

  std::size_t size() const noexcept { return diag_.size(); }
  double sub(std::size_t i) const { return sub_[i]; }      ///< A(i+1, i), i in 0..n-2
  double diag(std::size_t i) const { return diag_[i]; }    ///< A(i, i)
  double super(std::size_t i) const { return super_[i]; }  ///< A(i, i+1), i in 0..n-2

  template <class T>
  void apply(std::span<const T> x, std::span<T> y) const {
    const std::size_t n = size();
    if (x.size() != n || y.size() != n)
      throw std::invalid_argument("tridiagonal apply: dimension mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      T acc = diag_[i] * x[i];
      if (i > 0) acc += sub_[i - 1] * x[i - 1];
      if (i + 1 < n) acc += super_[i] * x[i + 1];
      y[i] = acc;
    }
  }

  template <class T>
  std::vector<T> apply(std::span<const T> x) const {
    std::vector<T> y(x.size());
    apply(x, std::span<T>(y));
    return y;
  }

  /// Max absolute row sum.
  double inf_norm() const;

  /// Debug dump, columns (row, sub, diag, super); absent corners print 0.
  void dump_csv(std::ostream& os) const;

private:
  std::vector<double> sub_, diag_, super_;
};

/// ca*A + cb*B, elementwise on the three diagonals.
TridiagonalOperator linear_combination(double ca, const TridiagonalOperator& A, double cb,
                                       const TridiagonalOperator& B);

/// LU factorization without pivoting (Thomas algorithm) with an explicit
/// near-zero pivot guard at 1e-13 relative to the operator's inf-norm.
/// Factor once, solve many times; solves allocate no shared state and are
/// safe to run concurrently.
class TridiagonalSolver {
public:
  explicit TridiagonalSolver(const TridiagonalOperator& A);

  template <class T>
  void solve_in_place(std::span<T> b) const {
    const std::size_t n = upper_diag_.size();
    if (b.size() != n) throw std::invalid_argument("tridiagonal solve: dimension mismatch");
    for (std::size_t i = 1; i < n; ++i) b[i] -= multipliers_[i - 1] * b[i - 1];
    b[n - 1] /= upper_diag_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
      b[i] = (b[i] - upper_super_[i] * b[i + 1]) / upper_diag_[i];
  }

  template <class T>
  std::vector<T> solve(std::span<const T> b) const {
    std::vector<T> x(b.begin(), b.end());
    solve_in_place(std::span<T>(x));
    return x;
  }

private:
  std::vector<double> multipliers_, upper_diag_, upper_super_;
};

/// One-shot convenience; factor + solve.
template <class T>
std::vector<T> tridiag_solve(const TridiagonalOperator& A, std::span<const T> b) {
  return TridiagonalSolver(A).solve(b);
}

} // namespace nlab
