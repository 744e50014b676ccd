#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace proxlearn {

// LDL^T factorization of I + mu*L^T*L for the first-difference operator with
// the x_0 = 0 convention: diagonal 1+2mu (last entry 1+mu), off-diagonal -mu.
// Built in O(n), solved in O(n) by forward/backward substitution.
class TridiagFactorization {
 public:
  TridiagFactorization() = default;

  std::size_t size() const { return pivot_inv_.size(); }
  double mu() const { return mu_; }

  void solve_inplace(std::span<double> b) const {
    const std::size_t n = size();
    if (b.size() != n)
      throw std::invalid_argument("TridiagFactorization::solve: size mismatch");
    for (std::size_t i = 1; i < n; ++i) b[i] -= lower_[i] * b[i - 1];
    for (std::size_t i = 0; i < n; ++i) b[i] *= pivot_inv_[i];
    for (std::size_t i = n - 1; i-- > 0;) b[i] -= lower_[i + 1] * b[i + 1];
  }

  std::vector<double> solve(std::span<const double> b) const {
    std::vector<double> x(b.begin(), b.end());
    solve_inplace(x);
    return x;
  }

 private:
  friend TridiagFactorization factorize(std::size_t n, double mu);

  double mu_ = 0.0;
  std::vector<double> pivot_inv_;  // 1/d_i of the LDL^T pivots
  std::vector<double> lower_;      // l_i = e/d_{i-1}, lower_[0] unused
};

TridiagFactorization factorize(std::size_t n, double mu);

}  // namespace proxlearn
