#pragma once

#include <cmath>
#include <vector>

namespace rsmt::detail {

// Correctly rounded sum of doubles (Shewchuk partials). The result depends
// only on the real value of the sum, not on term order.
class ExactSum {
 public:
  void add(double x) {
    std::size_t i = 0;
    for (double y : partials_) {
      if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials_[i++] = lo;
      x = hi;
    }
    partials_.resize(i);
    partials_.push_back(x);
  }

  // Adds |b - a| without rounding it first.
  void add_distance(double a, double b) {
    if (b < a) std::swap(a, b);
    const double s = b - a;
    const double bb = s - b;
    const double err = (b - (s - bb)) + (-a - bb);
    add(s);
    if (err != 0.0) add(err);
  }

  double value() const {
    std::size_t n = partials_.size();
    if (n == 0) return 0.0;
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials_[--n];
      hi = x + y;
      lo = y - (hi - x);
      if (lo != 0.0) break;
    }
    // Round half to even across the remaining partials.
    if (n > 0 && ((lo < 0 && partials_[n - 1] < 0) || (lo > 0 && partials_[n - 1] > 0))) {
      const double y = lo * 2;
      const double x = hi + y;
      if (y == x - hi) hi = x;
    }
    return hi;
  }

 private:
  std::vector<double> partials_;
};

}  // namespace rsmt::detail
