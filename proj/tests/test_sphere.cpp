#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "clr/ratcode.hpp"
#include "clr/sphere.hpp"

using namespace clr;

TEST_CASE("lattice counts: frozen values") {
    CHECK(lattice_count(1, 4).count == 5);
    CHECK(lattice_count(2, 4).count == 13);
    CHECK(lattice_count(3, 0).count == 1);
    CHECK(lattice_count(2, 1).count == 5);
    CHECK(lattice_count(3, 9).count == 123);
    CHECK(lattice_count(4, 16).count == 1281);
    CHECK(lattice_count(2, 25).count == 81);
    CHECK(lattice_count(2, 100).count == 317);
}

TEST_CASE("lattice counts: brute force cross-check up to dimension 4") {
    for (int n = 1; n <= 4; ++n) {
        const int R = 10;
        std::vector<std::int64_t> byshell(R * R + 1, 0);
        std::vector<std::int64_t> v(n, -R);
        while (true) {
            std::int64_t s2 = 0;
            for (auto x : v) s2 += x * x;
            if (s2 <= R * R) ++byshell[s2];
            int i = n - 1;
            while (i >= 0 && v[i] == R) v[i--] = -R;
            if (i < 0) break;
            ++v[i];
        }
        std::int64_t cum = 0;
        for (int t = 0; t <= R * R; ++t) {
            cum += byshell[t];
            CHECK(lattice_count(n, t).count == cum);
        }
    }
}

TEST_CASE("spiral rank: origin and the first shell in two dimensions") {
    CHECK(spiral_rank({0, 0}) == 0);
    CHECK(spiral_rank({0, 0, 0, 0, 0}) == 0);
    CHECK(spiral_rank({-1, 0}) == 1);
    CHECK(spiral_rank({0, -1}) == 2);
    CHECK(spiral_rank({0, 1}) == 3);
    CHECK(spiral_rank({1, 0}) == 4);
}

TEST_CASE("spiral rank: bijective on a full ball") {
    // Every vector with norm^2 <= 16 in Z^3 gets a distinct rank, and ranks
    // are exactly 0 .. count-1.
    std::map<BigInt, std::vector<std::int64_t>> seen;
    for (std::int64_t a = -4; a <= 4; ++a)
        for (std::int64_t b = -4; b <= 4; ++b)
            for (std::int64_t c = -4; c <= 4; ++c) {
                if (a * a + b * b + c * c > 16) continue;
                BigInt r = spiral_rank({a, b, c});
                CHECK(seen.emplace(r, std::vector<std::int64_t>{a, b, c}).second);
            }
    BigInt total = lattice_count(3, 16).count;
    CHECK(BigInt(seen.size()) == total);
    CHECK(seen.begin()->first == 0);
    CHECK(seen.rbegin()->first == total - 1);
}

TEST_CASE("spiral rank: norm-monotone") {
    BigInt prev = -1;
    // walk shells in order; every rank in shell s exceeds every rank in s-1
    for (std::int64_t s2 = 0; s2 <= 25; ++s2) {
        BigInt lo = lattice_count(3, s2).count, hi = -1;
        bool any = false;
        for (std::int64_t a = -5; a <= 5; ++a)
            for (std::int64_t b = -5; b <= 5; ++b)
                for (std::int64_t c = -5; c <= 5; ++c) {
                    if (a * a + b * b + c * c != s2) continue;
                    BigInt r = spiral_rank({a, b, c});
                    if (!any || r < lo) lo = r;
                    if (r > hi) hi = r;
                    any = true;
                }
        if (!any) continue;
        CHECK(lo > prev);
        prev = hi;
    }
}

TEST_CASE("spiral unrank: inverts rank") {
    std::mt19937_64 rng(43);
    for (int t = 0; t < 1000; ++t) {
        int n = 1 + static_cast<int>(rng() % 5);
        std::vector<std::int64_t> v(n);
        for (auto& x : v) x = static_cast<std::int64_t>(rng() % 21) - 10;
        BigInt r = spiral_rank(v);
        CHECK(spiral_unrank(n, r) == v);
    }
    // sequential ranks enumerate distinct vectors
    for (int r = 0; r < 200; ++r) {
        auto v = spiral_unrank(4, r);
        CHECK(spiral_rank(v) == r);
    }
}

TEST_CASE("spherical code length: norm-monotone and volume-bounded") {
    for (int n = 2; n <= 6; ++n) {
        int prev = 1;
        for (std::int64_t s = 1; s <= 10; ++s) {
            std::vector<std::int64_t> v(n, 0);
            v[0] = s;
            int len = spherical_code_len(v);
            CHECK(len >= prev);
            prev = len;
            double vol = std::exp2(sphere_volume_log2(n, static_cast<double>(s)));
            BigInt cap = static_cast<std::int64_t>(std::ceil(std::max(vol, 1.0)));
            CHECK(len <= length_u_big(cap) + 2);
        }
    }
}

TEST_CASE("sphere volume: frozen low-dimensional values") {
    CHECK(sphere_volume_log2(1, 1.0) == doctest::Approx(1.0));                  // 2r
    CHECK(sphere_volume_log2(2, 1.0) == doctest::Approx(std::log2(M_PI)));      // pi r^2
    CHECK(sphere_volume_log2(3, 1.0) == doctest::Approx(std::log2(4.0 * M_PI / 3.0)));
    CHECK(sphere_volume_log2(2, 10.0) == doctest::Approx(std::log2(100.0 * M_PI)));
}

TEST_CASE("h_bar: closed form and scaling laws") {
    CHECK(h_bar(1, 4.0, 1.0) == doctest::Approx(2.0).epsilon(1e-6));
    // quadrupling s_sq adds exactly n bits
    for (int n : {1, 3, 8, 50}) {
        double a = h_bar(n, 7.0, 0.5), b = h_bar(n, 28.0, 0.5);
        CHECK(b - a == doctest::Approx(static_cast<double>(n)).epsilon(1e-9));
        // halving delta_y likewise adds n bits
        double c = h_bar(n, 7.0, 0.25);
        CHECK(c - a == doctest::Approx(static_cast<double>(n)).epsilon(1e-9));
    }
}

TEST_CASE("h_bar: analytic derivative in s_sq matches finite differences") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> un(1.0, 60.0), us(5.0, 500.0);
    for (int t = 0; t < 200; ++t) {
        int n = 1 + static_cast<int>(rng() % 60);
        double s = us(rng), d = 0.25 + un(rng) / 60.0;
        double h = 1e-4 * s;
        double fd = (h_bar(n, s + h, d) - h_bar(n, s - h, d)) / (2 * h);
        double an = n / (2.0 * std::log(2.0) * s);
        CHECK(fd == doctest::Approx(an).epsilon(1e-6));
    }
}

TEST_CASE("h_bar: tracks the exact count within three bits at small scale") {
    for (int n = 2; n <= 6; ++n) {
        for (std::int64_t r = 5; r <= 10; ++r) {
            BigInt cnt = lattice_count(n, r * r).count;
            double lg = std::log2(cnt.convert_to<double>());
            double hb = h_bar(n, static_cast<double>(r * r), 1.0);
            CHECK(std::abs(hb - lg) <= 3.0);
        }
    }
}

TEST_CASE("h_applied: close to the ball entropy, minimum interior") {
    for (auto [n, sigma] : std::vector<std::pair<int, double>>{{100, 2.0}, {1000, 8.0}, {10000, 32.0}}) {
        double ha = h_applied(n, sigma);
        double hb = h_bar(n, n * sigma * sigma, 1.0);
        CHECK(std::abs(ha - hb) / hb <= 0.10);
        // never below the noiseless floor
        CHECK(ha >= n * 0.5 * std::log2(2 * M_PI * std::exp(1.0)) + n * std::log2(sigma));
    }
    // the quantization-width tradeoff has an interior optimum at this scale
    int n = 1000;
    double sigma = 8.0;
    double best = 1e300;
    int best_i = -1;
    for (int i = 0; i <= 120; ++i) {
        double ds = sigma * std::pow(1e-6, 1.0 - i / 120.0);
        double v = n * std::log2(sigma + ds) + alpha_len(sigma, ds);
        if (v < best) { best = v; best_i = i; }
    }
    CHECK(best_i > 0);
    CHECK(best_i < 120);
    CHECK(h_applied(n, sigma) ==
          doctest::Approx(n * 0.5 * std::log2(2 * M_PI * std::exp(1.0)) + best));
}

TEST_CASE("capacity gates") {
    CHECK_THROWS_AS(lattice_count(50, 10000000), CapacityError);
    CHECK_THROWS_AS(lattice_count(1, 50000000), CapacityError);
    std::vector<std::int64_t> big(40, 2000);
    CHECK_THROWS_AS(spiral_rank(big), CapacityError);
}
