#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "harness.hpp"
#include "mpc/groupwise.hpp"
#include "tree/oracle.hpp"

using namespace trefoil;
using namespace trefoil::testing;

static const RingConfig k32(32);

namespace {

std::vector<u128> to_u128(const std::vector<int64_t>& v) {
    std::vector<u128> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = k32.reduce((u128)(i128)v[i]);
    return out;
}

std::vector<uint8_t> to_flags(const std::vector<int64_t>& g) {
    return std::vector<uint8_t>(g.begin(), g.end());
}

std::vector<int64_t> random_flags(std::mt19937_64& rng, size_t n) {
    std::vector<int64_t> g(n, 0);
    g[0] = 1;
    for (size_t i = 1; i < n; ++i) g[i] = rng() % 3 == 0;
    return g;
}

}  // namespace

TEST_CASE("group sums broadcast each group's total") {
    std::vector<int64_t> g = {1, 0, 1, 1, 0, 0}, x = {4, 3, 2, 8, 9, 0};
    auto res = run3([&](PartyCtx& ctx) -> Bytes {
        auto sg = share_plain_for_tests(ctx, to_u128(g), k32);
        auto sx = share_plain_for_tests(ctx, to_u128(x), k32);
        return pack_u128s(open_all(ctx, group_sum(ctx, sg, sx)));
    });
    CHECK(unpack_u128s(res[0].output) == std::vector<u128>{7, 7, 2, 17, 17, 17});
}

TEST_CASE("one group means every entry is the grand total") {
    std::vector<int64_t> g = {1, 0, 0, 0}, x = {5, 1, 2, 2};
    auto res = run3([&](PartyCtx& ctx) -> Bytes {
        auto sg = share_plain_for_tests(ctx, to_u128(g), k32);
        auto sx = share_plain_for_tests(ctx, to_u128(x), k32);
        return pack_u128s(open_all(ctx, group_sum(ctx, sg, sx)));
    });
    CHECK(unpack_u128s(res[0].output) == std::vector<u128>{10, 10, 10, 10});
}

TEST_CASE("group prefix sums restart at boundaries") {
    std::vector<int64_t> g = {1, 0, 1, 1, 0, 0}, x = {4, 3, 2, 8, 9, 0};
    auto res = run3([&](PartyCtx& ctx) -> Bytes {
        auto sg = share_plain_for_tests(ctx, to_u128(g), k32);
        auto sx = share_plain_for_tests(ctx, to_u128(x), k32);
        return pack_u128s(open_all(ctx, group_prefix_sum(ctx, sg, sx)));
    });
    CHECK(unpack_u128s(res[0].output) == std::vector<u128>{4, 7, 2, 8, 17, 17});
}

TEST_CASE("group sums and prefixes match the reference on random inputs") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        size_t n = 1 + rng() % 24;
        auto g = random_flags(rng, n);
        std::vector<int64_t> x(n);
        for (auto& v : x) v = (int64_t)(rng() % 100);
        auto res = run3([&](PartyCtx& ctx) -> Bytes {
            auto sg = share_plain_for_tests(ctx, to_u128(g), k32);
            auto sx = share_plain_for_tests(ctx, to_u128(x), k32);
            GroupCtx groups(ctx, sg);
            auto sums = groups.sums(ctx, sx);
            Bytes o1 = pack_u128s(open_all(ctx, sums.total));
            Bytes o2 = pack_u128s(open_all(ctx, sums.prefix));
            o1.insert(o1.end(), o2.begin(), o2.end());
            return o1;
        });
        auto vals = unpack_u128s(res[0].output);
        auto expect_sum = oracle::group_sum(to_flags(g), x);
        auto expect_pre = oracle::group_prefix_sum(to_flags(g), x);
        for (size_t i = 0; i < n; ++i) {
            CHECK(vals[i] == (u128)expect_sum[i]);
            CHECK(vals[n + i] == (u128)expect_pre[i]);
        }
    }
}

TEST_CASE("group max broadcasts each group's maximum") {
    std::vector<int64_t> g = {1, 0, 1, 1, 0, 0}, x = {4, 3, 2, 8, 9, 0};
    auto res = run3([&](PartyCtx& ctx) -> Bytes {
        auto sg = share_plain_for_tests(ctx, to_u128(g), k32);
        auto sx = share_plain_for_tests(ctx, to_u128(x), k32);
        return pack_u128s(open_all(ctx, group_max(ctx, sg, sx)));
    });
    CHECK(unpack_u128s(res[0].output) == std::vector<u128>{4, 4, 2, 9, 9, 9});
}

TEST_CASE("paired group max carries the companion at the last argmax") {
    std::vector<int64_t> g = {1, 0, 1, 1, 0, 0}, x = {4, 3, 2, 8, 9, 0},
                         y = {10, 20, 30, 40, 50, 60};
    auto res = run3([&](PartyCtx& ctx) -> Bytes {
        auto sg = share_plain_for_tests(ctx, to_u128(g), k32);
        auto sx = share_plain_for_tests(ctx, to_u128(x), k32);
        auto sy = share_plain_for_tests(ctx, to_u128(y), k32);
        auto [mx, my] = group_max_pair(ctx, sg, sx, sy);
        Bytes o1 = pack_u128s(open_all(ctx, mx));
        Bytes o2 = pack_u128s(open_all(ctx, my));
        o1.insert(o1.end(), o2.begin(), o2.end());
        return o1;
    });
    auto vals = unpack_u128s(res[0].output);
    CHECK(std::vector<u128>(vals.begin(), vals.begin() + 6) ==
          std::vector<u128>{4, 4, 2, 9, 9, 9});
    CHECK(std::vector<u128>(vals.begin() + 6, vals.end()) ==
          std::vector<u128>{10, 10, 30, 50, 50, 50});
}

TEST_CASE("singleton groups leave the vector unchanged") {
    std::vector<int64_t> g = {1, 1, 1}, x = {9, 5, 7};
    auto res = run3([&](PartyCtx& ctx) -> Bytes {
        auto sg = share_plain_for_tests(ctx, to_u128(g), k32);
        auto sx = share_plain_for_tests(ctx, to_u128(x), k32);
        return pack_u128s(open_all(ctx, group_max(ctx, sg, sx)));
    });
    CHECK(unpack_u128s(res[0].output) == std::vector<u128>{9, 5, 7});
}

TEST_CASE("group max matches the reference, including ties and negatives") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        size_t n = 1 + rng() % 20;
        auto g = random_flags(rng, n);
        std::vector<int64_t> x(n), y(n);
        for (auto& v : x) v = (int64_t)(rng() % 9) - 4;
        for (size_t i = 0; i < n; ++i) y[i] = (int64_t)(100 + i);  // distinct markers
        auto res = run3([&](PartyCtx& ctx) -> Bytes {
            auto sg = share_plain_for_tests(ctx, to_u128(g), k32);
            auto sx = share_plain_for_tests(ctx, to_u128(x), k32);
            auto sy = share_plain_for_tests(ctx, to_u128(y), k32);
            auto [mx, my] = group_max_pair(ctx, sg, sx, sy);
            Bytes o1 = pack_u128s(open_all(ctx, mx));
            Bytes o2 = pack_u128s(open_all(ctx, my));
            o1.insert(o1.end(), o2.begin(), o2.end());
            return o1;
        });
        auto vals = unpack_u128s(res[0].output);
        auto [ex, ey] = oracle::group_max_pair(to_flags(g), x, y);
        for (size_t i = 0; i < n; ++i) {
            CHECK(k32.to_signed(vals[i]) == ex[i]);
            CHECK(vals[n + i] == (u128)ey[i]);
        }
    }
}

TEST_CASE("vector max picks the companion of the last maximum") {
    auto run_vm = [&](std::vector<int64_t> x, std::vector<int64_t> y) {
        auto res = run3([&](PartyCtx& ctx) -> Bytes {
            auto sx = share_plain_for_tests(ctx, to_u128(x), k32);
            auto sy = share_plain_for_tests(ctx, to_u128(y), k32);
            RepShare z = vect_max(ctx, sx, sy);
            ShareVec zv(k32, 1);
            set_at(zv, 0, z);
            return pack_u128s(open_all(ctx, zv));
        });
        return unpack_u128s(res[0].output)[0];
    };
    CHECK(run_vm({2, 3, 1}, {4, 5, 6}) == 5);
    CHECK(run_vm({3, 3}, {7, 8}) == 8);
    CHECK(run_vm({42}, {9}) == 9);

    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        size_t n = 1 + rng() % 10;
        std::vector<int64_t> x(n), y(n);
        for (auto& v : x) v = (int64_t)(rng() % 6);
        for (size_t i = 0; i < n; ++i) y[i] = (int64_t)(200 + i);
        CHECK(run_vm(x, y) == (u128)oracle::vect_max(x, y));
    }
}

TEST_CASE("sum and prefix-sum rounds do not grow with n") {
    auto rounds_for = [&](size_t n) {
        std::vector<int64_t> g(n, 0), x(n, 1);
        g[0] = 1;
        for (size_t i = 1; i < n; ++i) g[i] = i % 3 == 0;
        auto res = run3([&](PartyCtx& ctx) -> Bytes {
            auto sg = share_plain_for_tests(ctx, to_u128(g), k32);
            auto sx = share_plain_for_tests(ctx, to_u128(x), k32);
            GroupCtx groups(ctx, sg);
            ctx.meter().reset();
            groups.sums(ctx, sx);
            return {};
        });
        uint64_t mx = 0;
        for (auto& r : res) mx = std::max(mx, r.meter.online().rounds);
        return mx;
    };
    CHECK(rounds_for(8) == rounds_for(64));
}

TEST_CASE("group max rounds grow with log n") {
    auto rounds_for = [&](size_t n) {
        std::vector<int64_t> g(n, 0), x(n);
        g[0] = 1;
        for (size_t i = 0; i < n; ++i) x[i] = (int64_t)(i * 7 % 23);
        auto res = run3([&](PartyCtx& ctx) -> Bytes {
            auto sg = share_plain_for_tests(ctx, to_u128(g), k32);
            auto sx = share_plain_for_tests(ctx, to_u128(x), k32);
            GroupCtx groups(ctx, sg);
            ctx.meter().reset();
            groups.max(ctx, sx);
            return {};
        });
        uint64_t mx = 0;
        for (auto& r : res) mx = std::max(mx, r.meter.online().rounds);
        return (double)mx;
    };
    double r8 = rounds_for(8), r64 = rounds_for(64);
    // three doublings beyond n=8: ratio near log growth, far below linear
    CHECK(r64 > r8);
    CHECK(r64 / r8 < 3.0);
}
