#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hls/convolution.hpp"

using namespace hls;

namespace {

GridFunction random_function(const ProductGrid& g, std::uint64_t seed, double zero_fraction = 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(g.size());
    for (auto& x : v) x = u(rng) < zero_fraction ? 0.0 : 2.0 * u(rng);
    return GridFunction(g, std::move(v));
}

// Independent oracle. Output sample i is the value at x_i = c_i + h/2 per
// axis; the source at c_j needs the kernel at x_i - c_j = (i - j + 1/2) h,
// which is kernel cell i - j + N/2. Multi-indices are decoded by hand.
GridFunction brute_force(const GridFunction& f, const GridFunction& k) {
    const ProductGrid& g = f.grid();
    const int d = g.rank();
    const int N = g.points_per_axis();
    std::vector<double> out(g.size(), 0.0);
    std::vector<int> ia(d), ja(d);
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (int a = 0, r = static_cast<int>(i); a < d; ++a, r /= N) ia[d - 1 - a] = r % N;
        for (std::size_t j = 0; j < g.size(); ++j) {
            for (int a = 0, r = static_cast<int>(j); a < d; ++a, r /= N) ja[d - 1 - a] = r % N;
            long kidx = 0;
            bool ok = true;
            for (int a = 0; a < d; ++a) {
                const int off = ia[a] - ja[a] + N / 2;
                ok = ok && off >= 0 && off < N;
                kidx = kidx * N + off;
            }
            if (ok) out[i] += f[j] * k[static_cast<std::size_t>(kidx)] * std::pow(g.spacing(), d);
        }
    }
    return GridFunction(g, std::move(out));
}

double max_rel(const GridFunction& a, const GridFunction& b) { return relative_deviation(a, b); }

}  // namespace

TEST_CASE("direct convolution matches the brute-force oracle") {
    for (auto [m, n, N] : {std::tuple{1, 1, 8}, std::tuple{2, 1, 6}, std::tuple{1, 2, 4}, std::tuple{2, 2, 4}}) {
        const ProductGrid g(m, n, 1.0, N);
        const auto f = random_function(g, 1 + N, 0.2);
        const auto k = random_function(g, 100 + N);
        CHECK(max_rel(convolve_direct(f, k), brute_force(f, k)) <= 1e-12);
    }
}

TEST_CASE("spike recovers the translated kernel") {
    const ProductGrid g(1, 1, 2.0, 16);
    const auto k = riesz_kernel(g, Exponents::make(1, 1, 0.5, 0.5, 4.0 / 3.0, 4.0));
    for (auto [cx, cy] : {std::pair{8, 8}, std::pair{3, 12}}) {
        std::vector<double> v(g.size(), 0.0);
        v[g.flat(cx, cy)] = 1.0 / g.cell_volume();
        const GridFunction spike(g, v);
        const auto direct = convolve_direct(spike, k);
        const auto fast = convolve_fast(spike, k);
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 16; ++j) {
                const int a = i - cx + 8, b = j - cy + 8;
                const double expect = (a >= 0 && a < 16 && b >= 0 && b < 16) ? k.at(a, b) : 0.0;
                CHECK(std::abs(direct.at(i, j) - expect) <= 1e-12 * std::max(1.0, expect));
                CHECK(std::abs(fast.at(i, j) - expect) <= 1e-10 * k.max_value());
            }
    }
}

TEST_CASE("linearity") {
    const ProductGrid g(1, 1, 1.0, 12);
    const auto f = random_function(g, 3);
    const auto h = random_function(g, 4);
    const auto k = random_function(g, 5);
    std::vector<double> mix(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) mix[i] = 2.0 * f[i] + 0.5 * h[i];
    const auto lhs = convolve_direct(GridFunction(g, mix), k);
    const auto cf = convolve_direct(f, k);
    const auto ch = convolve_direct(h, k);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(std::abs(lhs[i] - (2.0 * cf[i] + 0.5 * ch[i])) <= 1e-12 * lhs.max_value());
}

TEST_CASE("fast path matches direct") {
    {
        const ProductGrid g(1, 1, 1.0, 32);
        const auto f = random_function(g, 42);
        const auto k = riesz_kernel(g, Exponents::make(1, 1, 0.5, 0.5, 4.0 / 3.0, 4.0));
        CHECK(max_rel(convolve_fast(f, k), convolve_direct(f, k)) <= 1e-10);
    }
    for (auto [m, n, N] : {std::tuple{2, 1, 8}, std::tuple{2, 2, 6}, std::tuple{1, 2, 10}}) {
        const ProductGrid g(m, n, 1.0, N);
        const auto f = random_function(g, 7 * N, 0.3);
        const auto k = random_function(g, 9 * N);
        CHECK(max_rel(convolve_fast(f, k), convolve_direct(f, k)) <= 1e-10);
    }
    const ProductGrid g(1, 1, 1.0, 16);
    const auto zero = convolve_fast(random_function(g, 1), GridFunction(g));
    CHECK(zero.is_zero());
    CHECK_THROWS(convolve_fast(random_function(g, 1), GridFunction(ProductGrid(1, 1, 2.0, 16))));
    CHECK_THROWS(convolve_direct(random_function(g, 1), GridFunction(ProductGrid(1, 1, 1.0, 8))));
}

TEST_CASE("region split partitions the convolution") {
    const ProductGrid g(1, 1, 1.0, 16);
    const auto e = Exponents::make(1, 1, 0.5, 0.5, 4.0 / 3.0, 4.0);
    const auto f = random_function(g, 77);
    const auto full = convolve_direct(f, riesz_kernel(g, e));
    const double L = g.half_width();
    for (const GridNode p : {GridNode{{0, 0}, {0, 0}}, GridNode{{7, 0}, {9, 0}}, GridNode{{15, 0}, {3, 0}}}) {
        const double ref = full.at(p);
        const auto half = region_split(f, e, p, L / 2, L / 2);
        CHECK(std::abs(half.total() - ref) <= 1e-12 * ref);

        const auto big = region_split(f, e, p, 10 * L, 10 * L);
        CHECK(big.t12 == 0.0);
        CHECK(big.t21 == 0.0);
        CHECK(big.t22 == 0.0);
        CHECK(std::abs(big.t11 - ref) <= 1e-12 * ref);

        // offsets are never closer than h/2
        const auto tiny = region_split(f, e, p, 0.4 * g.spacing(), 0.4 * g.spacing());
        CHECK(tiny.t11 == 0.0);
        CHECK(tiny.t12 == 0.0);
        CHECK(tiny.t21 == 0.0);
        CHECK(std::abs(tiny.t22 - ref) <= 1e-12 * ref);
    }
    CHECK_THROWS(region_split(f, e, GridNode{}, 0.0, 1.0));
    CHECK_THROWS(region_split(f, e, GridNode{}, 1.0, -1.0));
}

TEST_CASE("region split against a classification oracle") {
    const ProductGrid g(2, 1, 1.0, 6);
    const auto e = Exponents::make(2, 1, 1.0, 0.5, 1.5, 6.0);
    const auto f = random_function(g, 5, 0.1);
    const double h = g.spacing();
    const int N = 6;
    const GridNode p{{2, 4}, {1, 0}};
    for (auto [r1, r2] : {std::pair{0.3, 0.3}, std::pair{0.6, 0.2}, std::pair{1.1, 0.9}, std::pair{0.5 * h, 2.4 * h}}) {
        double t[2][2] = {{0, 0}, {0, 0}};
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b)
                for (int c = 0; c < N; ++c) {
                    const int o1 = p.x[0] - a + N / 2, o2 = p.x[1] - b + N / 2, o3 = p.y[0] - c + N / 2;
                    if (o1 < 0 || o1 >= N || o2 < 0 || o2 >= N || o3 < 0 || o3 >= N) continue;
                    const double u1 = (o1 - N / 2 + 0.5) * h, u2 = (o2 - N / 2 + 0.5) * h;
                    const double v = (o3 - N / 2 + 0.5) * h;
                    const double ru = std::hypot(u1, u2), rv = std::abs(v);
                    const double term = f.at(GridNode{{a, b}, {c, 0}}) * std::pow(ru, -1.0) * std::pow(rv, -0.5);
                    t[ru <= r1 ? 0 : 1][rv <= r2 ? 0 : 1] += term * h * h * h;
                }
        const auto s = region_split(f, e, p, r1, r2);
        CHECK(s.t11 == doctest::Approx(t[0][0]).epsilon(1e-12));
        CHECK(s.t12 == doctest::Approx(t[0][1]).epsilon(1e-12));
        CHECK(s.t21 == doctest::Approx(t[1][0]).epsilon(1e-12));
        CHECK(s.t22 == doctest::Approx(t[1][1]).epsilon(1e-12));
    }
}

TEST_CASE("region membership is closed at the radius") {
    // h = 1/4: every offset (k + 1/2) h is exact in binary
    const ProductGrid g(1, 1, 1.0, 8);
    const auto e = Exponents::make(1, 1, 0.5, 0.5, 4.0 / 3.0, 4.0);
    const GridFunction one(g, std::vector<double>(g.size(), 1.0));
    const GridNode p{{3, 0}, {3, 0}};
    const auto on = region_split(one, e, p, 0.125, 0.375);
    const auto below = region_split(one, e, p, std::nextafter(0.125, 0.0), 0.375);
    CHECK(on.t11 > 0.0);
    CHECK(below.t11 == 0.0);
    CHECK(on.total() == doctest::Approx(below.total()).epsilon(1e-14));
}

TEST_CASE("region split monotonicity") {
    const ProductGrid g(1, 1, 1.0, 16);
    const auto e = Exponents::make(1, 1, 0.5, 0.5, 4.0 / 3.0, 4.0);
    const auto f = random_function(g, 12, 0.3);
    const GridNode p{{5, 0}, {10, 0}};
    for (int axis = 0; axis < 2; ++axis) {
        RegionBounds prev{};
        prev.t22 = 1e300;
        for (double r = 0.02; r < 3.0; r *= 1.15) {
            const auto s = axis == 0 ? region_split(f, e, p, r, 0.4) : region_split(f, e, p, 0.4, r);
            CHECK(s.t11 >= 0.0);
            CHECK(s.t12 >= 0.0);
            CHECK(s.t21 >= 0.0);
            CHECK(s.t22 >= 0.0);
            CHECK(s.t11 >= prev.t11);
            CHECK(s.t22 <= prev.t22);
            prev = s;
        }
    }
}
