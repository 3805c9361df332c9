#pragma once

#include <cmath>
#include <limits>

namespace qsr {

// Kahan-compensated accumulator.
class KahanSum {
  public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

// Streaming log-sum-exp: result() = log(sum_i exp(x_i)).
class LogSumExp {
  public:
    void add(double log_x) {
        if (log_x == -std::numeric_limits<double>::infinity()) return;
        if (empty_) {
            max_ = log_x;
            sum_ = 1.0;
            empty_ = false;
            return;
        }
        if (log_x > max_) {
            sum_ = sum_ * std::exp(max_ - log_x) + 1.0;
            max_ = log_x;
        } else {
            sum_ += std::exp(log_x - max_);
        }
    }
    double result() const {
        if (empty_) return -std::numeric_limits<double>::infinity();
        return max_ + std::log(sum_);
    }

  private:
    bool empty_ = true;
    double max_ = 0.0;
    double sum_ = 0.0;
};

inline double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double m = a > b ? a : b;
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace qsr
