#ifndef MOMSPACE_RNG_HPP
#define MOMSPACE_RNG_HPP

#include <cstdint>
#include <random>

namespace momspace {

// splitmix64 mix; used to derive independent substreams from (seed, chain,
// purpose) without a shared global state.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t chain, std::uint64_t purpose);

// Deterministic distributions on top of mt19937_64. The transforms are
// implemented here (not std::*_distribution) so that streams are bit-stable
// across standard library versions.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}

  double u01();     // uniform on (0,1)
  double normal();  // standard normal (polar method)
  double gamma(double shape);  // Marsaglia-Tsang, any shape > 0
  double beta(double a, double b);

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0;
};

}  // namespace momspace

#endif
