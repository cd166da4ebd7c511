#include "wholm/kernels.hpp"

namespace wholm::kernels {
namespace {

void divide_scalar(const double* num, const double* den, double* out,
                   std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = num[i] / den[i];
}

void one_factor_scalar(const double* common, const double* idio,
                       const double* mu, double load_common, double load_idio,
                       double* out, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double shared = load_common * common[r];
    const double* in_row = idio + r * cols;
    double* out_row = out + r * cols;
    for (std::size_t c = 0; c < cols; ++c) {
      out_row[c] = (shared + load_idio * in_row[c]) + mu[c];
    }
  }
}

void column_moments_scalar(const double* data, std::size_t rows,
                           std::size_t cols, double* mean, double* ss) {
  for (std::size_t c = 0; c < cols; ++c) mean[c] = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = data + r * cols;
    for (std::size_t c = 0; c < cols; ++c) mean[c] += row[c];
  }
  const double n = static_cast<double>(rows);
  for (std::size_t c = 0; c < cols; ++c) {
    mean[c] /= n;
    ss[c] = 0.0;
  }
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = data + r * cols;
    for (std::size_t c = 0; c < cols; ++c) {
      const double d = row[c] - mean[c];
      ss[c] += d * d;
    }
  }
}

}  // namespace

namespace detail {
const KernelTable kScalarTable{Isa::Scalar, divide_scalar, one_factor_scalar,
                               column_moments_scalar};
}  // namespace detail

}  // namespace wholm::kernels
