#pragma once

#include <cstddef>
#include <deque>

#include "qhahn/errors.hpp"
#include "qhahn/qcore.hpp"
#include "qhahn/scalar.hpp"

namespace qhahn {

/// Accumulates the terms of a convergent series and decides when to stop.
///
/// The tail estimate is |t_n| * rho / (1 - rho) where rho is the largest
/// ratio |t_{k+1}/t_k| over the last `window` steps, and it is only trusted
/// once those magnitudes are monotonically non-increasing with rho < 1. A run
/// of `window + 1` exact zeros is taken as termination.
class TailSum {
 public:
  TailSum(const TailConfig& tail, long prec, std::size_t window = 4)
      : tail_(tail), sum_(prec), window_(window) {}

  // Adds a term. Returns true once the tail estimate is below eps.
  // Throws TailNotReached when more than max_terms terms were needed.
  bool add(const Scalar& term) { return add(term, abs(term)); }

  // As above, with the magnitude used by the stopping rule given explicitly
  // (e.g. the sum of |terms| of a whole block).
  bool add(const Scalar& term, const Scalar& magnitude) {
    sum_ += term;
    ++count_;
    mags_.push_back(magnitude);
    if (mags_.size() > window_ + 1) mags_.pop_front();
    if (converged()) return true;
    if (count_ >= tail_.max_terms) throw TailNotReached("series tail bound not reached within max_terms");
    return false;
  }

  const Scalar& value() const { return sum_; }
  std::size_t count() const { return count_; }

 private:
  bool converged() const {
    if (mags_.size() < window_ + 1) return false;
    bool all_zero = true;
    for (const auto& m : mags_) all_zero = all_zero && m.is_zero();
    if (all_zero) return true;
    Scalar rho(0, sum_.prec());
    for (std::size_t i = 1; i < mags_.size(); ++i) {
      if (mags_[i] > mags_[i - 1]) return false;
      if (mags_[i - 1].is_zero()) continue;
      Scalar r = mags_[i] / mags_[i - 1];
      if (r > rho) rho = r;
    }
    if (!(rho < 1)) return false;
    Scalar bound = mags_.back() * rho / (1 - rho);
    return bound < tail_.eps;
  }

  TailConfig tail_;
  Scalar sum_;
  std::size_t window_;
  std::size_t count_ = 0;
  std::deque<Scalar> mags_;
};

/// Sums term(n) for n = 0, 1, ... with TailSum's stopping rule.
template <typename TermFn>
Scalar sum_series(TermFn&& term, const TailConfig& tail, long prec) {
  TailSum acc(tail, prec);
  for (std::size_t n = 0;; ++n)
    if (acc.add(term(n))) return acc.value();
}

}  // namespace qhahn
