#pragma once

#include <cmath>

namespace fraclap {

// x^{p-2}, x^{p-1}, x^p for x > 0, with cheap paths for p in {1.5, 2, 3, 4}.
class Powers {
public:
  explicit Powers(double p) : p_(p), mode_(p == 2.0 ? 0 : p == 3.0 ? 1 : p == 1.5 ? 2 : p == 4.0 ? 3 : 4) {}

  double pm2(double x) const {
    switch (mode_) {
    case 0:
      return 1.0;
    case 1:
      return x;
    case 2:
      return 1.0 / std::sqrt(x);
    case 3:
      return x * x;
    default:
      return std::pow(x, p_ - 2.0);
    }
  }
  double pm1(double x) const {
    switch (mode_) {
    case 0:
      return x;
    case 1:
      return x * x;
    case 2:
      return std::sqrt(x);
    case 3:
      return x * x * x;
    default:
      return std::pow(x, p_ - 1.0);
    }
  }
  double pp(double x) const { return pm1(x) * x; }

private:
  double p_;
  int mode_;
};

} // namespace fraclap
