#pragma once

#include <cstdint>

#include "eftest/numerics.hpp"

namespace eftest {

// Philox4x32-10 block function (counter-based, stateless).
// out = E_key(counter) with the standard round constants.
inline void philox4x32(const std::uint32_t key[2],
                       const std::uint32_t counter[4], std::uint32_t out[4]) {
  std::uint32_t k0 = key[0], k1 = key[1];
  std::uint32_t x0 = counter[0], x1 = counter[1];
  std::uint32_t x2 = counter[2], x3 = counter[3];
  for (int round = 0; round < 10; ++round) {
    if (round != 0) {
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    const std::uint64_t p0 = 0xD2511F53ull * x0;
    const std::uint64_t p1 = 0xCD9E8D57ull * x2;
    const std::uint32_t y0 =
        static_cast<std::uint32_t>(p1 >> 32) ^ x1 ^ k0;
    const std::uint32_t y1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t y2 =
        static_cast<std::uint32_t>(p0 >> 32) ^ x3 ^ k1;
    const std::uint32_t y3 = static_cast<std::uint32_t>(p0);
    x0 = y0;
    x1 = y1;
    x2 = y2;
    x3 = y3;
  }
  out[0] = x0;
  out[1] = x1;
  out[2] = x2;
  out[3] = x3;
}

// One independent random stream addressed by (seed, stream). Every draw is a
// pure function of (seed, stream, draw index), so substreams keyed by
// replicate index reproduce bit-for-bit under any scheduling. Uniforms lie
// strictly inside (0,1); normals come from the inverse CDF, so no draws are
// ever rejected and the stream position stays schedule-independent.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  double next_uniform();
  double next_normal();

 private:
  void refill();

  std::uint32_t key_[2];
  std::uint32_t stream_[2];
  std::uint64_t block_ = 0;
  double pending_[2];
  int have_ = 0;
};

inline RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
  key_[0] = static_cast<std::uint32_t>(seed);
  key_[1] = static_cast<std::uint32_t>(seed >> 32);
  stream_[0] = static_cast<std::uint32_t>(stream);
  stream_[1] = static_cast<std::uint32_t>(stream >> 32);
}

inline void RngStream::refill() {
  const std::uint32_t ctr[4] = {static_cast<std::uint32_t>(block_),
                                static_cast<std::uint32_t>(block_ >> 32),
                                stream_[0], stream_[1]};
  std::uint32_t out[4];
  philox4x32(key_, ctr, out);
  ++block_;
  for (int half = 0; half < 2; ++half) {
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(out[2 * half + 1]) << 32) | out[2 * half];
    // 53 bits, then centered half-step: values lie strictly inside (0,1).
    pending_[half] = (static_cast<double>(bits >> 11) + 0.5) *
                     (1.0 / 9007199254740992.0);
  }
  have_ = 2;
}

inline double RngStream::next_uniform() {
  if (have_ == 0) refill();
  return pending_[2 - have_--];
}

inline double RngStream::next_normal() { return normal_quantile(next_uniform()); }

}  // namespace eftest
