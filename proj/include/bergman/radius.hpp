#pragma once

#include <cmath>

#include "bergman/errors.hpp"

namespace bergman {

// A point r in [0,1) carried together with its gap 1 - r, so that points
// closer to the boundary than double precision resolves in r stay usable.
class Radius {
 public:
  Radius() = default;

  static Radius from_r(double r) {
    if (!(r >= 0.0 && r < 1.0)) throw DomainError("radius must lie in [0,1)");
    return Radius(r, 1.0 - r);
  }

  static Radius from_gap(double gap) {
    if (!(gap > 0.0 && gap <= 1.0)) throw DomainError("gap must lie in (0,1]");
    return Radius(1.0 - gap, gap);
  }

  // t = -log(1 - r), the variable every radial integral is taken in.
  static Radius from_t(double t) {
    if (!(t >= 0.0) || std::isinf(t)) throw DomainError("t must be finite and nonnegative");
    return Radius(-std::expm1(-t), std::exp(-t));
  }

  double r() const { return r_; }
  double gap() const { return gap_; }
  double t() const { return -std::log(gap_); }
  // log r, accurate near both ends.
  double log_r() const { return r_ < 0.5 ? std::log(r_) : std::log1p(-gap_); }

  friend bool operator<(const Radius& a, const Radius& b) { return a.gap_ > b.gap_; }
  friend bool operator==(const Radius& a, const Radius& b) { return a.gap_ == b.gap_; }

 private:
  Radius(double r, double gap) : r_(r), gap_(gap) {}

  double r_ = 0.0;
  double gap_ = 1.0;
};

}  // namespace bergman
