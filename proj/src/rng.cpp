#include "sigloc/rng.hpp"

namespace sigloc {
namespace {

constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;  // golden ratio
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;  // sqrt(3) - 1

inline std::array<std::uint32_t, 4> round_once(
    const std::array<std::uint32_t, 4>& c,
    const std::array<std::uint32_t, 2>& key) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMult0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMult1) * c[2];
  return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ key[0],
          static_cast<std::uint32_t>(p1),
          static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ key[1],
          static_cast<std::uint32_t>(p0)};
}

// 53-bit mantissa from a 64-bit word, uniform on [0,1).
inline double to_unit_interval(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  for (int r = 0; r < 10; ++r) {
    if (r != 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    counter = round_once(counter, key);
  }
  return counter;
}

void RandomStream::refill(std::uint64_t block) {
  const std::array<std::uint32_t, 4> counter = {
      static_cast<std::uint32_t>(block),
      static_cast<std::uint32_t>(block >> 32),
      static_cast<std::uint32_t>(stream_id_),
      static_cast<std::uint32_t>(stream_id_ >> 32)};
  const auto words = philox4x32(counter, key_);
  buffer_[0] = to_unit_interval((static_cast<std::uint64_t>(words[1]) << 32) | words[0]);
  buffer_[1] = to_unit_interval((static_cast<std::uint64_t>(words[3]) << 32) | words[2]);
  buffer_block_ = block;
}

}  // namespace sigloc
