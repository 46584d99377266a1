#include <catch2/catch_amalgamated.hpp>

#include <mudiv/random.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

using mudiv::Rng;

TEST_CASE("philox known-answer vectors") {
    // Random123 kat_vectors for philox4x32-10.
    std::uint32_t out[4];
    SECTION("pi-digit counter and key") {
        const std::uint32_t ctr[4] = {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u};
        const std::uint32_t key[2] = {0xa4093822u, 0x299f31d0u};
        mudiv::detail::philox4x32_10(ctr, key, out);
        CHECK(out[0] == 0xd16cfe09u);
        CHECK(out[1] == 0x94fdccebu);
        CHECK(out[2] == 0x5001e420u);
        CHECK(out[3] == 0x24126ea1u);
    }
    SECTION("all-ones counter and key") {
        const std::uint32_t ctr[4] = {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu};
        const std::uint32_t key[2] = {0xffffffffu, 0xffffffffu};
        mudiv::detail::philox4x32_10(ctr, key, out);
        CHECK(out[0] == 0x408f276du);
        CHECK(out[1] == 0x41c83b0eu);
        CHECK(out[2] == 0xa20bc7c6u);
        CHECK(out[3] == 0x6d5451fdu);
    }
}

TEST_CASE("streams are independent and reproducible") {
    Rng a(123, 0), b(123, 0), c(123, 1), d(124, 0);
    bool all_equal_c = true, all_equal_d = true;
    for (int i = 0; i < 64; ++i) {
        const std::uint64_t va = a.next_u64();
        CHECK(va == b.next_u64());
        all_equal_c = all_equal_c && va == c.next_u64();
        all_equal_d = all_equal_d && va == d.next_u64();
    }
    CHECK_FALSE(all_equal_c);
    CHECK_FALSE(all_equal_d);
}

TEST_CASE("uniform draws live in the open unit interval") {
    Rng r(7, 0);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(std::fabs(sum / n - 0.5) < 3.0 * 0.2886751 / std::sqrt(n));
}

TEST_CASE("sampler moments") {
    const int n = 200000;
    SECTION("normal") {
        Rng r(11, 0);
        double s = 0.0, sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = r.normal();
            s += x;
            sq += x * x;
        }
        CHECK(std::fabs(s / n) < 3.0 / std::sqrt(n));
        CHECK(std::fabs(sq / n - 1.0) < 3.0 * std::sqrt(2.0) / std::sqrt(n));
    }
    SECTION("gamma shape 2.5 and shape 0.6") {
        for (double shape : {2.5, 0.6}) {
            Rng r(12, 0);
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += r.gamma(shape);
            CHECK(std::fabs(s / n - shape) < 3.0 * std::sqrt(shape) / std::sqrt(n));
        }
    }
    SECTION("poisson across both sampler regimes") {
        for (double lambda : {4.0, 50.0}) {
            Rng r(13, 0);
            double s = 0.0, sq = 0.0;
            for (int i = 0; i < n; ++i) {
                const double k = static_cast<double>(r.poisson(lambda));
                s += k;
                sq += k * k;
            }
            const double mean = s / n;
            const double var = sq / n - mean * mean;
            CHECK(std::fabs(mean - lambda) < 3.5 * std::sqrt(lambda) / std::sqrt(n));
            CHECK(std::fabs(var / lambda - 1.0) < 0.05);
        }
    }
}
