#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace franson {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
/// Maps a 128-bit counter and a 64-bit key to 128 pseudo-random bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Identifies an independent substream of a seed. Scan points and pipeline
/// stages each get their own substream so their draws never overlap.
struct Substream {
  std::uint32_t scan_index = 0;
  std::uint32_t purpose = 0;
};

namespace purpose {
inline constexpr std::uint32_t source = 1;
inline constexpr std::uint32_t detection = 2;
}  // namespace purpose

/// Sequential draws for one (seed, substream, index) triple.
///
/// The counter is (index, substream, block); every block yields two 64-bit
/// words. Two DrawSequences with the same triple produce the same values
/// regardless of what other sequences were used before, which is what makes
/// sampling order-independent.
class DrawSequence {
 public:
  DrawSequence(std::uint64_t seed, Substream stream, std::uint64_t index);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double uniform_open();
  /// Uniform on [0, 1).
  double uniform();
  double standard_normal();
  double exponential();

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  std::optional<double> spare_normal_;
};

/// Seeded, splittable generator handle. Cheap to copy.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, Substream stream = {}) : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const { return seed_; }
  Substream stream() const { return stream_; }

  CounterRng substream(Substream s) const { return CounterRng(seed_, s); }
  DrawSequence draws(std::uint64_t index) const { return DrawSequence(seed_, stream_, index); }

 private:
  std::uint64_t seed_;
  Substream stream_;
};

}  // namespace franson
