#pragma once

#include <array>
#include <cstdint>

namespace sigloc {

/// Philox4x32-10 keyed permutation (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Maps a 128-bit counter under a 64-bit key to four
/// statistically independent 32-bit words.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based uniform stream on [0,1). Every draw is a pure function of
/// (seed, stream_id, draw index): any position can be addressed directly with
/// seek(), so the sequence does not depend on how work is partitioned across
/// threads. Distinct stream_ids give independent sequences under the same
/// seed.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_id_(stream_id) {}

  /// Positions the stream so the next call to next_double() returns the
  /// draw with this index.
  void seek(std::uint64_t draw_index) { next_draw_ = draw_index; }

  std::uint64_t draw_index() const { return next_draw_; }

  double next_double() {
    const std::uint64_t block = next_draw_ >> 1;
    if (block != buffer_block_) refill(block);
    return buffer_[next_draw_++ & 1];
  }

 private:
  void refill(std::uint64_t block);

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_id_ = 0;
  std::uint64_t next_draw_ = 0;
  std::uint64_t buffer_block_ = ~std::uint64_t{0};
  std::array<double, 2> buffer_{};
};

inline RandomStream make_stream(std::uint64_t seed, std::uint64_t stream_id) {
  return RandomStream(seed, stream_id);
}

}  // namespace sigloc
