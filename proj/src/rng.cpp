#include "ppsv/rng.hpp"

namespace ppsv {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t task_stream_key(std::uint64_t master_seed, std::string_view state, std::size_t slot) noexcept {
    std::uint64_t h = mix64(master_seed ^ 0x5050535653545245ULL);
    h = mix64(h ^ fnv1a64(state));
    h = mix64(h ^ static_cast<std::uint64_t>(slot));
    return h;
}

RngStream::RngStream(std::uint64_t key, std::uint64_t sample_index) noexcept
    : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)}, sample_index_(sample_index) {}

std::uint64_t RngStream::next_u64() noexcept {
    if (used_ >= 4) {
        const Philox4x32::Counter ctr{static_cast<std::uint32_t>(sample_index_),
                                      static_cast<std::uint32_t>(sample_index_ >> 32), block_++, 0};
        buffer_ = Philox4x32::generate(ctr, key_);
        used_ = 0;
    }
    const std::uint64_t lo = buffer_[used_];
    const std::uint64_t hi = buffer_[used_ + 1];
    used_ += 2;
    ++draws_;
    return lo | (hi << 32);
}

std::uint64_t RngStream::next_below(std::uint64_t n) noexcept {
    const unsigned __int128 p = static_cast<unsigned __int128>(next_u64()) * n;
    return static_cast<std::uint64_t>(p >> 64);
}

}  // namespace ppsv
