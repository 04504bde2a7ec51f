#pragma once

#include <array>
#include <cstdint>

namespace tdiff {

// Philox4x32-10 counter-based generator: a keyed bijection of 128-bit counters.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            ctr = single_round(ctr, key);
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static Counter single_round(const Counter& c, const Key& k) {
        const std::uint64_t p0 = std::uint64_t(kMul0) * c[0];
        const std::uint64_t p1 = std::uint64_t(kMul1) * c[2];
        const auto hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
        const auto hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

// Independent random stream addressed by (seed, path, stream id, draw index). Draw i of a
// stream depends only on those four values, never on how many other draws were made.
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint64_t path, std::uint32_t stream)
        : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
          path_lo_(std::uint32_t(path)),
          path_hi_((std::uint32_t(path >> 32) & 0x3FFFFFFFu) | (stream << 30)) {}

    Philox4x32::Counter block(std::uint64_t index) const {
        return Philox4x32::generate(
            {std::uint32_t(index), std::uint32_t(index >> 32), path_lo_, path_hi_}, key_);
    }

    // Uniform in the open interval (0, 1): 52 random bits plus a half-ulp offset, so both
    // extremes (2^-53 and 1 - 2^-53) are exactly representable.
    static double to_unit(std::uint32_t hi, std::uint32_t lo) {
        const std::uint64_t bits = (std::uint64_t(hi) << 20) | (std::uint64_t(lo) >> 12);
        return (double(bits) + 0.5) * 0x1p-52;
    }

private:
    Philox4x32::Key key_;
    std::uint32_t path_lo_;
    std::uint32_t path_hi_;
};

}  // namespace tdiff
