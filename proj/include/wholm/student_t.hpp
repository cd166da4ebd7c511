#pragma once

namespace wholm {

/// Regularized incomplete beta I_x(a, b) for a, b > 0, evaluated by the
/// continued fraction (modified Lentz) on whichever side converges fast.
/// `y` must equal 1 - x; passing it separately keeps precision when x is
/// close to 1.
double regularized_incomplete_beta(double x, double y, double a, double b);

/// Student-t distribution with fixed degrees of freedom. The log-beta
/// normaliser is computed once at construction, so sf() is safe to call
/// concurrently.
class StudentT {
 public:
  explicit StudentT(double df);

  double df() const noexcept { return df_; }

  /// Upper tail Pr(T > t). Absolute error below 1e-12; sf(0) == 0.5 exactly.
  double sf(double t) const;

 private:
  double df_;
  double log_beta_;  // ln B(df/2, 1/2)
};

double student_t_sf(double t, double df);

}  // namespace wholm
