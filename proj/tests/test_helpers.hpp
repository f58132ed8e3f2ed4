#ifndef IGEH_TEST_HELPERS_HPP
#define IGEH_TEST_HELPERS_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace igeh::testing {

// Independent seeded normal source for Monte-Carlo oracles (kept separate
// from the library sampler on purpose).
class Normals {
public:
  explicit Normals(std::uint64_t seed) : eng_(seed) {}

  double operator()() {
    if (have_) {
      have_ = false;
      return cached_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    cached_ = rad * std::sin(6.283185307179586 * u2);
    have_ = true;
    return rad * std::cos(6.283185307179586 * u2);
  }

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

private:
  std::mt19937_64 eng_;
  double cached_ = 0.0;
  bool have_ = false;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

template <typename Fn>
McEstimate mc_mean(Fn&& f, std::size_t n, std::uint64_t seed) {
  Normals rng(seed);
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = f(rng);
    sum += v;
    sumsq += v * v;
  }
  McEstimate e;
  e.mean = sum / n;
  const double var = (sumsq - sum * sum / n) / (n - 1);
  e.std_error = std::sqrt(var / n);
  return e;
}

} // namespace igeh::testing

#endif
