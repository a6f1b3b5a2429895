#include <doctest.h>

#include <set>

#include "ppsv/rng.hpp"

using namespace ppsv;

TEST_CASE("philox4x32-10 known-answer vectors") {
    // Random123 kat_vectors.
    CHECK(Philox4x32::generate({0, 0, 0, 0}, {0, 0}) ==
          Philox4x32::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::generate({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          Philox4x32::Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          Philox4x32::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("stream positioning is O(1) and independent of other reads") {
    RngStream a(42, 10'000);
    RngStream b(42, 10'000);
    for (int i = 0; i < 3; ++i) (void)RngStream(42, 9'999).next_u64();
    for (int i = 0; i < 9; ++i) CHECK(a.next_u64() == b.next_u64());
    CHECK(a.draws() == 9);
}

TEST_CASE("distinct addresses give distinct streams") {
    std::set<std::uint64_t> firsts;
    for (std::uint64_t key = 0; key < 50; ++key)
        for (std::uint64_t idx = 0; idx < 50; ++idx) firsts.insert(RngStream(key, idx).next_u64());
    CHECK(firsts.size() == 2500);
}

TEST_CASE("unit draws stay in range") {
    RngStream r(7, 0);
    for (int i = 0; i < 10'000; ++i) {
        const double u = r.next_unit();
        CHECK((u >= 0.0 && u < 1.0));
        const double o = r.next_open_unit();
        CHECK((o > 0.0 && o < 1.0));
        CHECK(r.next_below(7) < 7);
    }
    CHECK(RngStream(1, 1).next_below(1) == 0);
}

TEST_CASE("task keys separate seed, state and slot") {
    std::set<std::uint64_t> keys;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
        for (const char* state : {"a", "b", "peak", "offpeak"})
            for (std::size_t slot = 0; slot < 20; ++slot) keys.insert(task_stream_key(seed, state, slot));
    CHECK(keys.size() == 20 * 4 * 20);
    CHECK(task_stream_key(1, "ab", 0) != task_stream_key(1, "ba", 0));
}
