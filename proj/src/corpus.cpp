#include "wholm/corpus.hpp"

#include <vector>

namespace wholm {

TestingProblem random_problem(Rng& gen, std::size_t m, const CorpusSpec& spec) {
  std::vector<double> p(m);
  std::vector<double> w(m);
  for (std::size_t i = 0; i < m; ++i) {
    p[i] = gen.uniform(0.0, spec.p_max);
    w[i] = gen.uniform(spec.w_lo, spec.w_hi);
  }
  return TestingProblem::from_values(std::move(p), std::move(w), spec.alpha);
}

}  // namespace wholm
