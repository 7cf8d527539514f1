#pragma once

#include <array>
#include <cstdint>

namespace rislink::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds (Salmon et al., SC'11). Stateless: the output is
// a pure function of (counter, key), which is what lets any trial be
// reproduced without replaying the ones before it.
inline Counter philox4x32(Counter ctr, Key key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
           static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
           static_cast<std::uint32_t>(p0)};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

// Uniform on (0, 1) from 53 bits; never returns 0 or 1.
inline double to_unit_open(std::uint32_t hi, std::uint32_t lo) {
  // 52 bits keep the largest value, 1 - 2^-53, representable.
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 12;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

// Sequence of uniform pairs for one (seed, substream) combination. Each
// next_pair() consumes one Philox block.
class UniformPairStream {
 public:
  UniformPairStream(std::uint64_t seed, std::uint64_t substream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        substream_(substream) {}

  std::array<double, 2> next_pair() {
    const Counter out = philox4x32(
        {static_cast<std::uint32_t>(draw_), static_cast<std::uint32_t>(draw_ >> 32),
         static_cast<std::uint32_t>(substream_),
         static_cast<std::uint32_t>(substream_ >> 32)},
        key_);
    ++draw_;
    return {to_unit_open(out[0], out[1]), to_unit_open(out[2], out[3])};
  }

 private:
  Key key_;
  std::uint64_t substream_;
  std::uint64_t draw_ = 0;
};

}  // namespace rislink::rng
