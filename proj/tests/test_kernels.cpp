#include <doctest.h>

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <string>

#include "wholm/error.hpp"
#include "wholm/kernels.hpp"
#include "wholm/rng.hpp"

using namespace wholm;
using kernels::Isa;

namespace {

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
  }
  return true;
}

std::vector<double> draw(Rng& gen, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = gen.uniform(lo, hi);
  return v;
}

const kernels::KernelTable& scalar() { return *kernels::table_for(Isa::Scalar); }

}  // namespace

TEST_CASE("scalar_is_always_available") {
  const auto isas = kernels::available_isas();
  REQUIRE_FALSE(isas.empty());
  CHECK(isas.front() == Isa::Scalar);
  CHECK(kernels::isa_name(Isa::Avx2) == "avx2");
  MESSAGE("compiled and usable: " << isas.size() << " variant(s), active "
                                  << kernels::isa_name(kernels::active().isa));
}

TEST_CASE("divide_variants_are_bitwise_equal") {
  Rng gen(1);
  for (Isa isa : kernels::available_isas()) {
    const auto& table = *kernels::table_for(isa);
    for (std::size_t n = 0; n <= 37; ++n) {
      const auto num = draw(gen, n, 0.0, 1.0);
      const auto den = draw(gen, n, 0.5, 5.0);
      std::vector<double> want(n), got(n);
      scalar().divide(num.data(), den.data(), want.data(), n);
      table.divide(num.data(), den.data(), got.data(), n);
      CHECK_MESSAGE(bitwise_equal(want, got), kernels::isa_name(isa) << " n=" << n);
    }
  }
}

TEST_CASE("one_factor_variants_are_bitwise_equal") {
  Rng gen(2);
  for (Isa isa : kernels::available_isas()) {
    const auto& table = *kernels::table_for(isa);
    for (std::size_t cols : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 13u}) {
      for (std::size_t rows : {1u, 2u, 15u}) {
        const auto common = draw(gen, rows, -3, 3);
        const auto idio = draw(gen, rows * cols, -3, 3);
        const auto mu = draw(gen, cols, 0, 1);
        std::vector<double> want(rows * cols), got(rows * cols);
        scalar().one_factor(common.data(), idio.data(), mu.data(), 0.7071, 0.7071, want.data(),
                            rows, cols);
        table.one_factor(common.data(), idio.data(), mu.data(), 0.7071, 0.7071, got.data(), rows,
                         cols);
        CHECK_MESSAGE(bitwise_equal(want, got),
                      kernels::isa_name(isa) << " " << rows << "x" << cols);
      }
    }
  }
}

TEST_CASE("column_moments_variants_are_bitwise_equal") {
  Rng gen(3);
  for (Isa isa : kernels::available_isas()) {
    const auto& table = *kernels::table_for(isa);
    for (std::size_t cols : {1u, 3u, 4u, 5u, 9u, 16u, 17u}) {
      for (std::size_t rows : {1u, 2u, 15u, 100u}) {
        const auto data = draw(gen, rows * cols, -5, 5);
        std::vector<double> mean_a(cols), ss_a(cols), mean_b(cols), ss_b(cols);
        scalar().column_moments(data.data(), rows, cols, mean_a.data(), ss_a.data());
        table.column_moments(data.data(), rows, cols, mean_b.data(), ss_b.data());
        CHECK_MESSAGE(bitwise_equal(mean_a, mean_b), kernels::isa_name(isa));
        CHECK_MESSAGE(bitwise_equal(ss_a, ss_b), kernels::isa_name(isa));
      }
    }
  }
}

TEST_CASE("scalar_reference_values") {
  const std::vector<double> data{1, 10, 2, 20, 3, 30};  // 3 rows x 2 cols
  std::vector<double> mean(2), ss(2);
  kernels::column_moments(data, 3, 2, mean, ss);
  CHECK(mean[0] == 2.0);
  CHECK(mean[1] == 20.0);
  CHECK(ss[0] == 2.0);
  CHECK(ss[1] == 200.0);

  std::vector<double> out(4);
  kernels::one_factor(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3, 4},
                      std::vector<double>{10, 20}, 2.0, 0.5, out);
  CHECK(out == std::vector<double>{12.5, 23.0, 15.5, 26.0});
}

TEST_CASE("span_wrappers_check_sizes") {
  std::vector<double> a(3), b(2), out(3);
  CHECK_THROWS_AS(kernels::divide(a, b, out), UsageError);
  std::vector<double> mean(2), ss(2);
  CHECK_THROWS_AS(kernels::column_moments(a, 2, 2, mean, ss), UsageError);
}

TEST_CASE("active_honours_forced_isa") {
  const char* forced = std::getenv("WHOLM_ISA");
  const auto& table = kernels::active();
  if (forced != nullptr && kernels::table_for(Isa::Avx2) != nullptr && std::string(forced) == "avx2") {
    CHECK(table.isa == Isa::Avx2);
  } else if (forced != nullptr && std::string(forced) == "scalar") {
    CHECK(table.isa == Isa::Scalar);
  } else {
    CHECK(table.isa == kernels::available_isas().back());
  }
}

TEST_CASE("active_matches_scalar_reference") {
  Rng gen(4);
  const std::size_t rows = 15, cols = 10;
  const auto data = draw(gen, rows * cols, -2, 2);
  std::vector<double> mean_a(cols), ss_a(cols), mean_b(cols), ss_b(cols);
  scalar().column_moments(data.data(), rows, cols, mean_a.data(), ss_a.data());
  kernels::column_moments(data, rows, cols, mean_b, ss_b);
  CHECK(bitwise_equal(mean_a, mean_b));
  CHECK(bitwise_equal(ss_a, ss_b));
}
