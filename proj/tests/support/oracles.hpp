#pragma once

// Reference computations that share no code with the library.

#include <cstddef>
#include <span>
#include <vector>

namespace oracle {

/// Pr(T > t) for Student t by composite 16-point Gauss-Legendre quadrature
/// of the density over [0, |t|].
double t_sf_quadrature(double t, double df);

/// Upper-tail quantile: the t with t_sf_quadrature(t, df) == upper, by
/// bisection.
double t_quantile_bisection(double upper, double df);

/// Transition graph of the weighted Holm family restricted to `active`:
/// level_l = w_l alpha / sum_active w, g_lk = w_k / sum_{active \ l} w.
struct ClosedFormGraph {
  std::vector<double> level;
  std::vector<double> g;  // row-major m x m
};
ClosedFormGraph closed_form_graph(std::span<const double> w, double alpha,
                                  const std::vector<bool>& active);

/// max over x = 0.01, 0.02, ..., 1.00 of |F_n(x) - x|.
double uniform_grid_deviation(std::span<const double> samples);

/// Ordering-free step-down reference: at each step, scan all remaining
/// hypotheses for the key minimum and test it against its threshold.
std::vector<std::size_t> naive_whp(std::span<const double> p, std::span<const double> w,
                                   double alpha);
std::vector<std::size_t> naive_wap(std::span<const double> p, std::span<const double> w,
                                   double alpha);

}  // namespace oracle
