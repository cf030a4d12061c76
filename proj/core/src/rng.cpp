#include "sinai/rng.hpp"

namespace sinai {

void Xoshiro256::reseed(std::uint64_t seed) noexcept {
  // Seed the state with a splitmix64 stream; never all-zero.
  std::uint64_t x = seed;
  for (auto& word : s_) {
    x += 0x9e3779b97f4a7c15ULL;
    word = mix64(x);
  }
}

}  // namespace sinai
