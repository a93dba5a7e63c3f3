#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace bergman {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without overflow.
inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// log(exp(a) - exp(b)) for b <= a. Returns -inf when b == a.
inline double log_sub(double a, double b) {
  if (b == kNegInf) return a;
  if (b >= a) return kNegInf;
  const double d = b - a;
  return a + (d > -0.6931471805599453 ? std::log(-std::expm1(d)) : std::log1p(-std::exp(d)));
}

// A nonnegative quantity v kept through its logarithm. When log v drops below
// -1e300 the value is held as ll = log(-log v) instead, which is how the double
// exponential tails stay comparable. Zero is log v = -inf.
class DeepLog {
 public:
  static constexpr double kDeepThreshold = 1e300;

  DeepLog() = default;

  static DeepLog zero() { return DeepLog(); }

  static DeepLog from_log(double lg) {
    DeepLog d;
    if (lg == kNegInf || std::isnan(lg)) {
      d.lg_ = lg;
    } else if (lg < -kDeepThreshold) {
      d.deep_ = true;
      d.ll_ = std::log(-lg);
      d.lg_ = lg;
    } else {
      d.lg_ = lg;
    }
    return d;
  }

  // v = exp(-exp(ll)).
  static DeepLog from_neg_exp(double ll) {
    const double e = std::exp(ll);
    if (e <= kDeepThreshold) return from_log(-e);
    DeepLog d;
    d.deep_ = true;
    d.ll_ = ll;
    d.lg_ = kNegInf;
    return d;
  }

  bool is_zero() const { return !deep_ && lg_ == kNegInf; }
  bool is_deep() const { return deep_; }

  // Natural log of the value; -inf once it no longer fits in a double.
  double log() const { return deep_ ? -std::exp(ll_) : lg_; }

  // log(-log v), finite for every nonzero v < 1.
  double loglog() const {
    if (deep_) return ll_;
    if (lg_ >= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::log(-lg_);
  }

  // Strict ordering of the underlying values.
  friend bool operator<(const DeepLog& a, const DeepLog& b) {
    if (a.is_zero()) return !b.is_zero();
    if (b.is_zero()) return false;
    if (a.deep_ && b.deep_) return a.ll_ > b.ll_;
    if (a.deep_) return true;
    if (b.deep_) return false;
    return a.lg_ < b.lg_;
  }
  friend bool operator==(const DeepLog& a, const DeepLog& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() == b.is_zero();
    if (a.deep_ != b.deep_) return false;
    return a.deep_ ? a.ll_ == b.ll_ : a.lg_ == b.lg_;
  }
  friend bool operator<=(const DeepLog& a, const DeepLog& b) { return a < b || a == b; }

  // log(a / b). Exact zero when both sides are the same deep value.
  friend double log_ratio(const DeepLog& a, const DeepLog& b) {
    if (a.is_zero()) return b.is_zero() ? std::numeric_limits<double>::quiet_NaN() : kNegInf;
    if (b.is_zero()) return kInf;
    if (!a.deep_ && !b.deep_) return a.lg_ - b.lg_;
    if (a.deep_ && b.deep_) {
      if (a.ll_ == b.ll_) return 0.0;
      // -exp(la) + exp(lb) = exp(max) * (+-1 -+ exp(min - max))
      if (a.ll_ > b.ll_) return -std::exp(a.ll_) * (-std::expm1(b.ll_ - a.ll_));
      return std::exp(b.ll_) * (-std::expm1(a.ll_ - b.ll_));
    }
    return a.deep_ ? kNegInf : kInf;
  }

  friend DeepLog operator+(const DeepLog& a, const DeepLog& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (!a.deep_ && !b.deep_) return from_log(log_add(a.lg_, b.lg_));
    // a deep term is negligible against anything shallow, and the smaller of two
    // deep terms is negligible against the larger one
    return a < b ? b : a;
  }

  // a - b for b <= a (clamped at zero).
  friend DeepLog operator-(const DeepLog& a, const DeepLog& b) {
    if (b.is_zero()) return a;
    if (a <= b) return zero();
    if (!a.deep_ && !b.deep_) return from_log(log_sub(a.lg_, b.lg_));
    return a;
  }

  // v^p for p > 0.
  DeepLog pow(double p) const {
    if (is_zero()) return *this;
    if (!deep_) return from_log(p * lg_);
    return from_neg_exp(ll_ + std::log(p));
  }

  DeepLog times_log(double lg) const {
    if (is_zero()) return *this;
    if (!deep_) return from_log(lg_ + lg);
    return *this;
  }

 private:
  bool deep_ = false;
  double lg_ = kNegInf;
  double ll_ = 0.0;
};

}  // namespace bergman
