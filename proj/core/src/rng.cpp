#include "bgw/rng.hpp"

namespace bgw {

Rng::Rng(std::uint64_t seed) noexcept {
  std::uint64_t x = seed;
  for (auto& word : s_) {
    word = splitmix64(x);
    x += 0x9E3779B97F4A7C15ull;
  }
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t path_index) noexcept {
  return splitmix64(master ^ splitmix64(path_index + 0x9E3779B97F4A7C15ull));
}

Rng stream_for(std::uint64_t master, std::uint64_t path_index) noexcept {
  return Rng(stream_seed(master, path_index));
}

}  // namespace bgw
