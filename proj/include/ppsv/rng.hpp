#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace ppsv {

/// Philox4x32-10 block function (Salmon et al., Random123). Stateless:
/// maps a 128-bit counter and 64-bit key to 128 random bits.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) noexcept;
};

/// 64-bit finalizer from SplitMix64.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Key of the rng address space owned by one (seed, state, slot) task.
std::uint64_t task_stream_key(std::uint64_t master_seed, std::string_view state, std::size_t slot) noexcept;

/// Counter-addressed random stream. One RngStream covers the draws of one
/// sample: the address is (stream key, sample index), and successive draws
/// walk a third counter word. Positioning is O(1); nothing depends on how
/// many other samples were drawn before.
class RngStream {
public:
    RngStream(std::uint64_t key, std::uint64_t sample_index) noexcept;

    std::uint64_t next_u64() noexcept;

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1) with 53 random bits; never returns 0 or 1.
    double next_open_unit() noexcept { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    /// Uniform integer in [0, n), n >= 1, via 128-bit multiply-high.
    std::uint64_t next_below(std::uint64_t n) noexcept;

    std::uint64_t draws() const noexcept { return draws_; }

private:
    Philox4x32::Key key_;
    std::uint64_t sample_index_;
    std::uint32_t block_ = 0;
    Philox4x32::Counter buffer_{};
    int used_ = 4;
    std::uint64_t draws_ = 0;
};

}  // namespace ppsv
