#pragma once

#include <cmath>

namespace narrow {

// Neumaier's variant of Kahan summation. Stays accurate when an addend is
// larger in magnitude than the running sum.
template <typename Scalar>
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(Scalar initial) : sum_(initial) {}

  CompensatedSum& operator+=(Scalar x) {
    const Scalar t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      correction_ += (sum_ - t) + x;
    } else {
      correction_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  CompensatedSum& operator+=(const CompensatedSum& other) {
    *this += other.sum_;
    *this += other.correction_;
    return *this;
  }

  Scalar value() const { return sum_ + correction_; }

 private:
  Scalar sum_{0};
  Scalar correction_{0};
};

// Running mean and standard error of a stream of samples.
struct SampleMoments {
  CompensatedSum<double> sum;
  CompensatedSum<double> sum_sq;
  long long count = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
  }

  void merge(const SampleMoments& other) {
    sum += other.sum;
    sum_sq += other.sum_sq;
    count += other.count;
  }

  double mean() const { return count ? sum.value() / double(count) : 0.0; }

  double stderr_of_mean() const {
    if (count < 2) return 0.0;
    const double m = mean();
    const double var = (sum_sq.value() - double(count) * m * m) / double(count - 1);
    return var > 0 ? std::sqrt(var / double(count)) : 0.0;
  }
};

}  // namespace narrow
