#include "nlop/numerics.hpp"

#include <cmath>

namespace nlop {

namespace {
// Gauss-Kronrod 15-point nodes/weights on [-1,1] (Kronrod extension of G7).
constexpr double kXgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                            0.741531185599394, 0.586087235467691, 0.405845151377397,
                            0.207784955007898, 0.0};
constexpr double kWgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                            0.140653259715525, 0.169004726639267, 0.190350578064785,
                            0.204432940075298, 0.209482141084728};
}  // namespace

double gauss15(const std::function<double(double)>& f, double a, double b) {
  double c = 0.5 * (a + b), hl = 0.5 * (b - a);
  double acc = kWgk[7] * f(c);
  for (int i = 0; i < 7; ++i)
    acc += kWgk[i] * (f(c - hl * kXgk[i]) + f(c + hl * kXgk[i]));
  return acc * hl;
}

static double adapt(const std::function<double(double)>& f, double a, double b,
                    double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double left = gauss15(f, a, m), right = gauss15(f, m, b);
  if (depth <= 0 || std::abs(left + right - whole) <= tol) return left + right;
  return adapt(f, a, m, left, 0.5 * tol, depth - 1) +
         adapt(f, m, b, right, 0.5 * tol, depth - 1);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth) {
  if (a == b) return 0.0;
  return adapt(f, a, b, gauss15(f, a, b), tol, max_depth);
}

}  // namespace nlop
