#include "proxlearn/tridiag.hpp"

namespace proxlearn {

TridiagFactorization factorize(std::size_t n, double mu) {
  if (n == 0) throw std::invalid_argument("factorize: n must be >= 1");
  if (mu < 0.0) throw std::invalid_argument("factorize: mu must be >= 0");
  TridiagFactorization f;
  f.mu_ = mu;
  f.pivot_inv_.resize(n);
  f.lower_.resize(n, 0.0);
  const double off = -mu;
  double pivot = 1.0 + (n == 1 ? mu : 2.0 * mu);
  f.pivot_inv_[0] = 1.0 / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    const double l = off * f.pivot_inv_[i - 1];
    f.lower_[i] = l;
    const double diag = (i + 1 == n) ? 1.0 + mu : 1.0 + 2.0 * mu;
    pivot = diag - l * off;
    f.pivot_inv_[i] = 1.0 / pivot;
  }
  return f;
}

}  // namespace proxlearn
