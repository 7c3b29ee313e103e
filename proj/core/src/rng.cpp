#include "sievevar/rng.hpp"

#include <cmath>
#include <numbers>

namespace sievevar {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

RandomStream RandomStream::substream(std::uint64_t index) const noexcept {
  // child key mixes the whole parent identity; the child index becomes the stream word
  const std::uint64_t child_key = splitmix64(id_.key ^ splitmix64(id_.stream + 0x632BE59BD9B4E019ull));
  return RandomStream(StreamId{child_key, index});
}

void RandomStream::refill() noexcept {
  const std::array<std::uint32_t, 4> ctr{
      static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
      static_cast<std::uint32_t>(id_.stream), static_cast<std::uint32_t>(id_.stream >> 32)};
  const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(id_.key),
                                         static_cast<std::uint32_t>(id_.key >> 32)};
  buffer_ = philox4x32(ctr, key);
  buffered_ = 2;
  ++block_;
}

RandomStream::result_type RandomStream::operator()() noexcept {
  if (buffered_ == 0) {
    refill();
  }
  --buffered_;
  const int slot = buffered_ == 1 ? 0 : 2;
  return (static_cast<std::uint64_t>(buffer_[slot + 1]) << 32) | buffer_[slot];
}

double RandomStream::uniform() noexcept {
  return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
}

double RandomStream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  spare_normal_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::size_t RandomStream::index(std::size_t n) noexcept {
  const auto bound = static_cast<std::uint64_t>(n);
  // reject the top partial range so every residue is equally likely
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = (*this)();
    if (x >= threshold) {
      return static_cast<std::size_t>(x % bound);
    }
  }
}

}  // namespace sievevar
