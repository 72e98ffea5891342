#pragma once

#include <cmath>
#include <cstdint>

namespace coxkit {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
//
// A stream is addressed by (seed, replicate, lane); draws within a stream
// advance a 64-bit position counter. Distinct addresses never share
// outputs, so replicate k of a Monte Carlo run gets the same numbers
// whether it executes serially, in parallel, or alone.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t replicate = 0,
                     std::uint64_t lane = 0) noexcept
      : key0_(static_cast<std::uint32_t>(seed)),
        key1_(static_cast<std::uint32_t>(seed >> 32)),
        stream_lo_(static_cast<std::uint32_t>(replicate)),
        stream_hi_(static_cast<std::uint32_t>(lane) ^
                   (static_cast<std::uint32_t>(replicate >> 32) *
                    0x9E3779B9u)) {}

  std::uint32_t next_u32() noexcept {
    if (buffer_pos_ == 4) {
      generate_block();
      buffer_pos_ = 0;
    }
    return buffer_[buffer_pos_++];
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  // Uniform on the open interval (0, 1): 53-bit mantissa, offset by half
  // an ulp so neither endpoint is reachable.
  double uniform01() noexcept {
    const double x = static_cast<double>(next_u64() >> 11);
    return (x + 0.5) * 0x1.0p-53;
  }

  // Unit-rate exponential by inverse CDF. Strictly positive and finite.
  double exponential() noexcept { return -std::log1p(-uniform01()); }

  // Uniform on {0, 1, ..., n-1} by scaling; adequate for small n.
  std::uint64_t uniform_index(std::uint64_t n) noexcept {
    return static_cast<std::uint64_t>(uniform01() * static_cast<double>(n)) %
           n;
  }

 private:
  void generate_block() noexcept {
    std::uint32_t c0 = ctr_lo_;
    std::uint32_t c1 = ctr_hi_;
    std::uint32_t c2 = stream_lo_;
    std::uint32_t c3 = stream_hi_;
    std::uint32_t k0 = key0_;
    std::uint32_t k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(0xD2511F53u) * c0;
      const std::uint64_t p1 = static_cast<std::uint64_t>(0xCD9E8D57u) * c2;
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      c0 = hi1 ^ c1 ^ k0;
      c1 = lo1;
      c2 = hi0 ^ c3 ^ k1;
      c3 = lo0;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    buffer_[0] = c0;
    buffer_[1] = c1;
    buffer_[2] = c2;
    buffer_[3] = c3;
    if (++ctr_lo_ == 0) ++ctr_hi_;
  }

  std::uint32_t key0_;
  std::uint32_t key1_;
  std::uint32_t stream_lo_;
  std::uint32_t stream_hi_;
  std::uint32_t ctr_lo_ = 0;
  std::uint32_t ctr_hi_ = 0;
  std::uint32_t buffer_[4] = {};
  int buffer_pos_ = 4;
};

}  // namespace coxkit
