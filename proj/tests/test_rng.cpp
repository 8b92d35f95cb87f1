#include <doctest.h>

#include "mstopics/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

using namespace mstopics;

TEST_CASE("same seed gives same stream") {
    SplitMix64 a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("uniform stays in [0,1)") {
    SplitMix64 rng(7);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("bounded covers the full range without bias spikes") {
    SplitMix64 rng(123);
    std::vector<int> counts(10, 0);
    for (int i = 0; i < 100000; ++i) ++counts[rng.bounded(10)];
    for (int c : counts) {
        CHECK(c > 9000);
        CHECK(c < 11000);
    }
}

TEST_CASE("shuffle is a permutation and depends on the seed") {
    std::vector<int> base(50);
    std::iota(base.begin(), base.end(), 0);

    auto a = base;
    auto b = base;
    auto c = base;
    SplitMix64 r1(1), r2(1), r3(2);
    shuffle(a, r1);
    shuffle(b, r2);
    shuffle(c, r3);

    CHECK(a == b);
    CHECK(a != c);
    auto sorted = a;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == base);
}

TEST_CASE("derive_seed separates streams and indices") {
    std::set<std::uint64_t> seeds;
    for (std::uint64_t s = 0; s < 20; ++s)
        for (std::uint64_t i = 0; i < 20; ++i) seeds.insert(derive_seed(99, s, i));
    CHECK(seeds.size() == 400);
    CHECK(derive_seed(99, 3, 4) != derive_seed(99, 4, 3));
    CHECK(derive_seed(99, 3, 4) == derive_seed(99, 3, 4));
}

TEST_CASE("gaussian has roughly standard moments") {
    SplitMix64 rng(2024);
    const int n = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gaussian();
        sum += g;
        sum_sq += g * g;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
}
