#include "rofdist/rng.hpp"

#include <cmath>

namespace rofdist {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  std::uint64_t state = a;
  std::uint64_t h = splitmix64(state);
  state ^= b + 0x9e3779b97f4a7c15ULL;
  h ^= splitmix64(state);
  state ^= c + 0xc2b2ae3d27d4eb4fULL;
  h ^= splitmix64(state);
  state ^= d + 0x165667b19e3779f9ULL;
  h ^= splitmix64(state);
  return h;
}

Rng::Rng(std::uint64_t seed) {
  // run the seed through splitmix so nearby seeds give unrelated streams
  std::uint64_t state = seed;
  engine_.seed(splitmix64(state));
}

std::uint64_t Rng::next_u64() { return engine_(); }

double Rng::uniform() {
  // 53 random mantissa bits -> [0, 1)
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::uniform_int(int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next_u64() % span);
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; 1 - u keeps the log argument in (0, 1]
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

cplx Rng::complex_gaussian(double var) {
  const double scale = std::sqrt(var / 2.0);
  const double re = gaussian();
  const double im = gaussian();
  return {scale * re, scale * im};
}

}  // namespace rofdist
