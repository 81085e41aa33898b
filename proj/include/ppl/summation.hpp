#pragma once

#include <Eigen/Dense>

namespace ppl {

/* Neumaier's compensated summation: like Kahan's, but the correction also
 * survives when the incoming term is larger than the running sum. Horizons
 * here reach n = 10^4 buyers and T = 10^5 rows, where naive accumulation
 * would already eat several of the guaranteed decimal digits.
 */
class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Compensated mean of a contiguous Eigen column/array, in index order.
template <typename Derived>
double compensated_mean(const Eigen::DenseBase<Derived>& xs) {
  NeumaierSum s;
  for (Eigen::Index i = 0; i < xs.size(); ++i) s.add(xs.derived()(i));
  return s.value() / static_cast<double>(xs.size());
}

}  // namespace ppl
