#include <arm_neon.h>

#include "wholm/kernels.hpp"

namespace wholm::kernels {
namespace {

constexpr std::size_t kLanes = 2;

void divide_neon(const double* num, const double* den, double* out,
                 std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    vst1q_f64(out + i, vdivq_f64(vld1q_f64(num + i), vld1q_f64(den + i)));
  }
  for (; i < n; ++i) out[i] = num[i] / den[i];
}

void one_factor_neon(const double* common, const double* idio, const double* mu,
                     double load_common, double load_idio, double* out,
                     std::size_t rows, std::size_t cols) {
  const float64x2_t idio_load = vdupq_n_f64(load_idio);
  for (std::size_t r = 0; r < rows; ++r) {
    const double shared = load_common * common[r];
    const float64x2_t shared_v = vdupq_n_f64(shared);
    const double* in_row = idio + r * cols;
    double* out_row = out + r * cols;
    std::size_t c = 0;
    for (; c + kLanes <= cols; c += kLanes) {
      // vmulq + vaddq, not vfmaq: must round like the scalar path.
      const float64x2_t scaled = vmulq_f64(idio_load, vld1q_f64(in_row + c));
      const float64x2_t v =
          vaddq_f64(vaddq_f64(shared_v, scaled), vld1q_f64(mu + c));
      vst1q_f64(out_row + c, v);
    }
    for (; c < cols; ++c) out_row[c] = (shared + load_idio * in_row[c]) + mu[c];
  }
}

void column_moments_neon(const double* data, std::size_t rows, std::size_t cols,
                         double* mean, double* ss) {
  const std::size_t vec_cols = cols - cols % kLanes;
  const float64x2_t n = vdupq_n_f64(static_cast<double>(rows));
  for (std::size_t c = 0; c < vec_cols; c += kLanes) {
    float64x2_t sum = vdupq_n_f64(0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      sum = vaddq_f64(sum, vld1q_f64(data + r * cols + c));
    }
    const float64x2_t mu = vdivq_f64(sum, n);
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      const float64x2_t d = vsubq_f64(vld1q_f64(data + r * cols + c), mu);
      acc = vaddq_f64(acc, vmulq_f64(d, d));
    }
    vst1q_f64(mean + c, mu);
    vst1q_f64(ss + c, acc);
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
const KernelTable kNeonTable{Isa::Neon, divide_neon, one_factor_neon,
                             column_moments_neon};
}  // namespace detail

}  // namespace wholm::kernels
