// Compiled with -mavx2 only; callers reach it through table_for(), which
// checks the CPU first. FMA is deliberately not enabled.

#include <immintrin.h>

#include "wholm/kernels.hpp"

namespace wholm::kernels {
namespace {

constexpr std::size_t kLanes = 4;

void divide_avx2(const double* num, const double* den, double* out,
                 std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d a = _mm256_loadu_pd(num + i);
    const __m256d b = _mm256_loadu_pd(den + i);
    _mm256_storeu_pd(out + i, _mm256_div_pd(a, b));
  }
  for (; i < n; ++i) out[i] = num[i] / den[i];
}

void one_factor_avx2(const double* common, const double* idio, const double* mu,
                     double load_common, double load_idio, double* out,
                     std::size_t rows, std::size_t cols) {
  const __m256d idio_load = _mm256_set1_pd(load_idio);
  for (std::size_t r = 0; r < rows; ++r) {
    const double shared = load_common * common[r];
    const __m256d shared_v = _mm256_set1_pd(shared);
    const double* in_row = idio + r * cols;
    double* out_row = out + r * cols;
    std::size_t c = 0;
    for (; c + kLanes <= cols; c += kLanes) {
      const __m256d z = _mm256_loadu_pd(in_row + c);
      const __m256d m = _mm256_loadu_pd(mu + c);
      const __m256d v =
          _mm256_add_pd(_mm256_add_pd(shared_v, _mm256_mul_pd(idio_load, z)), m);
      _mm256_storeu_pd(out_row + c, v);
    }
    for (; c < cols; ++c) out_row[c] = (shared + load_idio * in_row[c]) + mu[c];
  }
}

void column_moments_avx2(const double* data, std::size_t rows, std::size_t cols,
                         double* mean, double* ss) {
  const std::size_t vec_cols = cols - cols % kLanes;
  const __m256d n = _mm256_set1_pd(static_cast<double>(rows));
  for (std::size_t c = 0; c < vec_cols; c += kLanes) {
    __m256d sum = _mm256_setzero_pd();
    for (std::size_t r = 0; r < rows; ++r) {
      sum = _mm256_add_pd(sum, _mm256_loadu_pd(data + r * cols + c));
    }
    const __m256d mu = _mm256_div_pd(sum, n);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t r = 0; r < rows; ++r) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(data + r * cols + c), mu);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    _mm256_storeu_pd(mean + c, mu);
    _mm256_storeu_pd(ss + c, acc);
  }
  for (std::size_t c = vec_cols; c < cols; ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < rows; ++r) sum += data[r * cols + c];
    const double mu = sum / static_cast<double>(rows);
    double acc = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      const double d = data[r * cols + c] - mu;
      acc += d * d;
    }
    mean[c] = mu;
    ss[c] = acc;
  }
}

}  // namespace

namespace detail {
const KernelTable kAvx2Table{Isa::Avx2, divide_avx2, one_factor_avx2,
                             column_moments_avx2};
}  // namespace detail

}  // namespace wholm::kernels
