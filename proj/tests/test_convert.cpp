#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "harness.hpp"
#include "mpc/convert.hpp"

using namespace trefoil;
using namespace trefoil::testing;

TEST_CASE("truncation identity examples") {
    // d0=5, d1=3, c=2: floor(8/4)=2, d0 mod 4 = 1 >= d mod 4 = 0 -> bit 0
    auto r = trunc_identity_check(5, 3, 2, 8, 64);
    CHECK(r.value == 2);
    CHECK(r.bit == 0);
    // d0=3, d1=3, c=2: floor(6/4)=1, 3 mod 4 >= 6 mod 4 -> bit 0 -> value 1
    auto r2 = trunc_identity_check(3, 3, 2, 8, 64);
    CHECK(r2.value == 1);
    CHECK(r2.bit == 0);
}

TEST_CASE("truncation identity is exhaustive for width 8") {
    const int k = 8, l = 64;
    for (int c = 0; c < k; ++c)
        for (int d0 = 0; d0 < (1 << k); ++d0)
            for (int d1 = 0; d1 < (1 << k); ++d1) {
                auto r = trunc_identity_check((u128)d0, (u128)d1, c, k, l);
                if (!(r.bit == 0 || r.bit == 1)) {
                    CAPTURE(d0);
                    CAPTURE(d1);
                    CAPTURE(c);
                    REQUIRE((r.bit == 0 || r.bit == 1));
                }
            }
}

TEST_CASE("identity bit vanishes in the conversion regime") {
    // d = x + ovfl*2^k with x < 2^(k-1) and c = k-1: floor(d/2^c) is even and
    // equals the identity value minus its low bit
    const int k = 8, l = 64;
    for (int x = 0; x < (1 << (k - 1)); ++x)
        for (int ovfl = 0; ovfl <= 1; ++ovfl) {
            int d = x + ovfl * (1 << k);
            for (int d0 = std::max(0, d - 255); d0 <= std::min(255, d); ++d0) {
                int d1 = d - d0;
                auto r = trunc_identity_check((u128)d0, (u128)d1, k - 1, k, l);
                u128 floor_sum = (u128)(d >> (k - 1));
                CHECK((floor_sum & 1) == 0);
                CHECK(r.bit == (i128)(r.value & 1));
            }
        }
}

static void roundtrip_case(int k, int l, const std::vector<u128>& secrets) {
    RingConfig kcfg(k), lcfg(l);
    auto res = run3([&](PartyCtx& ctx) -> Bytes {
        ctx.ensure_dabits(l, secrets.size());
        ConversionContext cc(kcfg, lcfg, &ctx.dabit_pool(l));
        auto sx = share_plain_for_tests(ctx, secrets, kcfg);
        auto lifted = convert_share(ctx, sx, cc);
        return pack_u128s(open_all(ctx, lifted));
    });
    auto vals = unpack_u128s(res[0].output);
    for (size_t i = 0; i < secrets.size(); ++i) CHECK(vals[i] == secrets[i]);
}

TEST_CASE("conversion is exact for every valid secret at width 8") {
    std::vector<u128> secrets;
    for (int x = 0; x < 128; ++x) secrets.push_back((u128)x);
    roundtrip_case(8, 64, secrets);
}

TEST_CASE("conversion is exact on random 32-bit secrets") {
    std::mt19937_64 rng(21);
    std::vector<u128> secrets(10000);
    for (auto& s : secrets) s = (u128)(rng() & 0x7fffffffull);
    secrets[0] = 7;
    secrets[1] = 0;
    secrets[2] = (u128)0x7fffffffull;  // boundary
    roundtrip_case(32, 128, secrets);
}

TEST_CASE("conversion costs 4l+4 online bits in one round") {
    RingConfig kcfg(32), lcfg(128);
    std::vector<u128> secrets = {12345};
    auto res = run3([&](PartyCtx& ctx) -> Bytes {
        ctx.ensure_dabits(128, 1);
        ConversionContext cc(kcfg, lcfg, &ctx.dabit_pool(128));
        auto sx = share_plain_for_tests(ctx, secrets, kcfg);
        ctx.meter().reset();
        ctx.set_phase(Phase::Online);
        auto lifted = convert_share(ctx, sx, cc);
        (void)lifted;
        return {};
    });
    uint64_t bits = 0, max_rounds = 0;
    for (auto& r : res) {
        bits += r.meter.online().payload_bits;
        max_rounds = std::max(max_rounds, r.meter.online().rounds);
    }
    CHECK(bits == 4 * 128 + 4);  // 516
    CHECK(max_rounds == 1);
    CHECK(res[2].meter.online().rounds == 1);
}

TEST_CASE("batched conversion scales bits by n and keeps one round") {
    RingConfig kcfg(32), lcfg(128);
    std::vector<u128> secrets(50);
    for (size_t i = 0; i < secrets.size(); ++i) secrets[i] = (u128)i * 31 + 1;
    auto res = run3([&](PartyCtx& ctx) -> Bytes {
        ctx.ensure_dabits(128, secrets.size());
        ConversionContext cc(kcfg, lcfg, &ctx.dabit_pool(128));
        auto sx = share_plain_for_tests(ctx, secrets, kcfg);
        ctx.meter().reset();
        auto lifted = convert_share(ctx, sx, cc);
        return pack_u128s(open_all(ctx, lifted));
    });
    uint64_t bits = 0;
    for (auto& r : res) bits += r.meter.online().payload_bits;
    // the reconstruction costs 3*n*l on top of the conversion's n*(4l+4)
    CHECK(bits == 50 * (4 * 128 + 4) + 3 * 50 * 128);
    CHECK(unpack_u128s(res[0].output) == secrets);
}

TEST_CASE("an empty daBit pool is a setup error") {
    RingConfig kcfg(32), lcfg(128);
    std::vector<u128> secrets = {5};
    CHECK_THROWS_WITH_AS(run3([&](PartyCtx& ctx) -> Bytes {
                             ConversionContext cc(kcfg, lcfg, &ctx.dabit_pool(128));
                             auto sx = share_plain_for_tests(ctx, secrets, kcfg);
                             convert_share(ctx, sx, cc);
                             return {};
                         }),
                         doctest::Contains("daBit"), Error);
}

TEST_CASE("downward conversion is local reduction") {
    RingConfig kcfg(32), lcfg(128);
    std::mt19937_64 rng(22);
    std::vector<u128> secrets(1000);
    for (auto& s : secrets) s = (u128)(rng() & 0x7fffffffull);
    auto res = run3([&](PartyCtx& ctx) -> Bytes {
        auto sx = share_plain_for_tests(ctx, secrets, lcfg);
        ctx.meter().reset();
        auto down = convert_down(sx, kcfg);
        if (ctx.meter().online().total_bytes() != 0)
            throw Error(ErrorKind::Protocol, "reduction communicated");
        return pack_u128s(open_all(ctx, down));
    });
    CHECK(unpack_u128s(res[0].output) == secrets);
}

TEST_CASE("two-party conversion is exact for every valid width-8 secret") {
    RingConfig k8(8), l64(64);
    for (int x = 0; x < 128; ++x) {
        auto [s0, s1] = convert_share_two_party((u128)x, k8, l64, 1000 + (uint64_t)x);
        CHECK(l64.reduce(s0 + s1) == (u128)x);
    }
}

TEST_CASE("two-party conversion at the range boundary and random widths") {
    RingConfig k32(32), l128(128);
    std::mt19937_64 rng(23);
    auto [b0, b1] = convert_share_two_party((u128{1} << 31) - 1, k32, l128, 7);
    CHECK(l128.reduce(b0 + b1) == (u128{1} << 31) - 1);
    for (int rep = 0; rep < 2000; ++rep) {
        u128 x = (u128)(rng() & 0x7fffffffull);
        auto [s0, s1] = convert_share_two_party(x, k32, l128, rng());
        CHECK(l128.reduce(s0 + s1) == x);
    }
    CHECK_THROWS_AS(convert_share_two_party(u128{1} << 31, k32, l128, 1), Error);
}

TEST_CASE("the two-party randomness dealer is flagged as test-only") {
    CHECK(TwoPartyDabitDealer::insecure_test_dealer);
}
