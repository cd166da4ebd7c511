#include <cstdlib>
#include <string>

#include "wholm/error.hpp"
#include "wholm/kernels.hpp"

namespace wholm::kernels {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return &detail::kScalarTable;
    case Isa::Avx2:
#if defined(WHOLM_HAVE_AVX2)
      if (__builtin_cpu_supports("avx2")) return &detail::kAvx2Table;
#endif
      return nullptr;
    case Isa::Neon:
#if defined(WHOLM_HAVE_NEON)
      return &detail::kNeonTable;  // baseline on aarch64
#else
      return nullptr;
#endif
  }
  return nullptr;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
    if (table_for(isa) != nullptr) out.push_back(isa);
  }
  return out;
}

namespace {

const KernelTable& select() {
  if (const char* forced = std::getenv("WHOLM_ISA")) {
    const std::string want(forced);
    for (Isa isa : available_isas()) {
      if (isa_name(isa) == want) return *table_for(isa);
    }
  }
  const auto isas = available_isas();
  return *table_for(isas.back());
}

void require(bool ok, const char* what) {
  if (!ok) throw UsageError(what);
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

void divide(std::span<const double> num, std::span<const double> den,
            std::span<double> out) {
  require(num.size() == den.size() && out.size() == num.size(),
          "divide: span sizes differ");
  active().divide(num.data(), den.data(), out.data(), num.size());
}

void one_factor(std::span<const double> common, std::span<const double> idio,
                std::span<const double> mu, double load_common, double load_idio,
                std::span<double> out) {
  const std::size_t rows = common.size();
  const std::size_t cols = mu.size();
  require(idio.size() == rows * cols && out.size() == rows * cols,
          "one_factor: matrix size does not match rows x cols");
  active().one_factor(common.data(), idio.data(), mu.data(), load_common,
                      load_idio, out.data(), rows, cols);
}

void column_moments(std::span<const double> data, std::size_t rows,
                    std::size_t cols, std::span<double> mean,
                    std::span<double> sum_sq_dev) {
  require(rows >= 1, "column_moments: need at least one row");
  require(data.size() == rows * cols && mean.size() == cols &&
              sum_sq_dev.size() == cols,
          "column_moments: span sizes do not match rows x cols");
  active().column_moments(data.data(), rows, cols, mean.data(),
                          sum_sq_dev.data());
}

}  // namespace wholm::kernels
