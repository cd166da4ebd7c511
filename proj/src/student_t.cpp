#include "wholm/student_t.hpp"

#include <cmath>
#include <limits>

#include "wholm/error.hpp"

namespace wholm {

namespace {

constexpr int kMaxIterations = 10000;
constexpr double kTiny = 1e-300;
constexpr double kConverged = 1e-16;

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for I_x(a,b) up to the prefactor
// x^a y^b / (a B(a,b)). Converges quickly for x < (a+1)/(a+b+2).
double beta_continued_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kConverged) return h;
  }
  throw InvariantError("incomplete beta continued fraction did not converge");
}

double incomplete_beta(double x, double y, double a, double b, double lbeta) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double front = std::exp(a * std::log(x) + b * std::log(y) - lbeta);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(x, a, b) / a;
  }
  return 1.0 - front * beta_continued_fraction(y, b, a) / b;
}

}  // namespace

double regularized_incomplete_beta(double x, double y, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw ValidationError("incomplete beta: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) {
    throw ValidationError("incomplete beta: x must lie in [0,1]");
  }
  return incomplete_beta(x, y, a, b, log_beta(a, b));
}

StudentT::StudentT(double df) : df_(df), log_beta_(0.0) {
  if (!(df > 0.0 && std::isfinite(df))) {
    throw ValidationError("Student t: degrees of freedom must be positive");
  }
  log_beta_ = log_beta(0.5 * df, 0.5);
}

double StudentT::sf(double t) const {
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
  const double t2 = t * t;
  const double denom = df_ + t2;
  // Pr(|T| > |t|) = I_{df/(df+t^2)}(df/2, 1/2)
  const double two_sided = incomplete_beta(df_ / denom, t2 / denom, 0.5 * df_, 0.5, log_beta_);
  const double upper = 0.5 * two_sided;
  return t >= 0.0 ? upper : 1.0 - upper;
}

double student_t_sf(double t, double df) { return StudentT(df).sf(t); }

}  // namespace wholm
