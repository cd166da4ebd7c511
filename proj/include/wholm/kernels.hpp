#pragma once

// Data-parallel inner loops with a scalar reference and SIMD variants.
//
// Every variant vectorises across independent lanes (elements or columns)
// and performs the same IEEE operations in the same order per lane as the
// scalar reference, so all variants are bitwise identical. Builds use
// -ffp-contract=off to keep it that way.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace wholm::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;

  /// out[i] = num[i] / den[i]
  void (*divide)(const double* num, const double* den, double* out,
                 std::size_t n);

  /// Row-major rows x cols:
  /// out[r][c] = (load_common * common[r] + load_idio * idio[r][c]) + mu[c]
  void (*one_factor)(const double* common, const double* idio, const double* mu,
                     double load_common, double load_idio, double* out,
                     std::size_t rows, std::size_t cols);

  /// Row-major rows x cols, rows >= 1. Two-pass:
  /// mean[c] = (sum_r x[r][c]) / rows, ss[c] = sum_r (x[r][c] - mean[c])^2.
  void (*column_moments)(const double* data, std::size_t rows, std::size_t cols,
                         double* mean, double* sum_sq_dev);
};

/// nullptr when the variant is not compiled in or the CPU lacks it.
const KernelTable* table_for(Isa isa);

/// Scalar first, then every other usable variant.
std::vector<Isa> available_isas();

/// Best usable variant. The WHOLM_ISA environment variable (scalar, avx2,
/// neon) forces a choice when that variant is usable.
const KernelTable& active();

// Span conveniences over active().

void divide(std::span<const double> num, std::span<const double> den,
            std::span<double> out);

void one_factor(std::span<const double> common, std::span<const double> idio,
                std::span<const double> mu, double load_common, double load_idio,
                std::span<double> out);

void column_moments(std::span<const double> data, std::size_t rows,
                    std::size_t cols, std::span<double> mean,
                    std::span<double> sum_sq_dev);

namespace detail {
extern const KernelTable kScalarTable;
#if defined(WHOLM_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
#if defined(WHOLM_HAVE_NEON)
extern const KernelTable kNeonTable;
#endif
}  // namespace detail

}  // namespace wholm::kernels
