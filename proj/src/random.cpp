#include "orq/random.hpp"

namespace orq {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, StreamRole role,
                          std::uint64_t index) {
  std::uint64_t h = splitmix64(root);
  h = splitmix64(h ^ (static_cast<std::uint64_t>(role) * 0xd6e8feb86659fd93ULL));
  return splitmix64(h ^ (index * 0xa0761d6478bd642fULL));
}

std::uint64_t RandomStream::below(std::uint64_t n) {
  // Rejection on the top of the range keeps the result unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

}  // namespace orq
