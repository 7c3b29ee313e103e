#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace sievevar {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Maps a 128-bit counter and 64-bit key to 128 bits.
[[nodiscard]] std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                                      std::array<std::uint32_t, 2> key) noexcept;

/// Identity of a stream: the key and stream index that fully determine it.
struct StreamId {
  std::uint64_t key = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const StreamId&, const StreamId&) = default;
};

/**
 * Counter-based random stream.
 *
 * The output is a pure function of (key, stream, position), so a replication
 * seeded with substream(r) produces the same numbers regardless of which
 * thread runs it or in what order. Satisfies UniformRandomBitGenerator.
 */
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : id_{seed, stream} {}
  explicit RandomStream(StreamId id) noexcept : id_(id) {}

  /// Independent child stream; children of distinct indices do not overlap.
  [[nodiscard]] RandomStream substream(std::uint64_t index) const noexcept;

  [[nodiscard]] const StreamId& id() const noexcept { return id_; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept;

  /// Uniform on (0, 1].
  double uniform() noexcept;
  /// Standard normal via Box-Muller.
  double normal() noexcept;
  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n) noexcept;

 private:
  void refill() noexcept;

  StreamId id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sievevar
