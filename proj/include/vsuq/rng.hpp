#pragma once

#include <array>
#include <cstdint>

namespace vsuq {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// Every draw is a pure function of (key, counter), so a stream can be
/// addressed by (seed, sample index, coordinate) without any shared state.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit constexpr Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  constexpr Counter operator()(Counter ctr) const {
    Key k = key_;
    for (int round = 0; round < 10; ++round) {
      ctr = single_round(ctr, k);
      k[0] += kWeyl0;
      k[1] += kWeyl1;
    }
    return ctr;
  }

  /// 64 random bits addressed by (stream, index, lane).
  constexpr std::uint64_t bits(std::uint64_t stream, std::uint64_t index,
                               std::uint32_t lane = 0) const {
    const Counter c{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(stream), lane};
    const Counter r = (*this)(c);
    return (static_cast<std::uint64_t>(r[0]) << 32) | r[1];
  }

  /// Uniform double strictly inside (0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t stream, std::uint64_t index,
                           std::uint32_t lane = 0) const {
    return (static_cast<double>(bits(stream, index, lane) >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static constexpr Counter single_round(const Counter& c, const Key& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
            static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
  }

  Key key_;
};

/// Sequential convenience wrapper: a Philox stream with an incrementing index.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream) : gen_(seed), stream_(stream) {}
  double uniform() { return gen_.uniform(stream_, index_++); }
  std::uint64_t bits() { return gen_.bits(stream_, index_++); }
  /// Uniform integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t b;
    do {
      b = bits();
    } while (b >= limit);
    return b % n;
  }

 private:
  Philox4x32 gen_;
  std::uint64_t stream_;
  std::uint64_t index_ = 0;
};

}  // namespace vsuq
