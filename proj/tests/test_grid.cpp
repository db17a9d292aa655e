#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "hls/grid.hpp"
#include "hls/grid_io.hpp"

using namespace hls;

namespace {

GridFunction random_function(const ProductGrid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    std::vector<double> v(g.size());
    for (auto& x : v) x = u(rng);
    return GridFunction(g, std::move(v));
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("grid geometry") {
    const ProductGrid g(1, 1, 2.0, 8);
    CHECK(g.spacing() * g.points_per_axis() == 2.0 * g.half_width());
    CHECK(g.coordinate(0) == doctest::Approx(-1.75));
    CHECK(g.coordinate(7) == doctest::Approx(1.75));
    // even N: no cell centre at the origin
    for (int i = 0; i < 8; ++i) CHECK(g.coordinate(i) != 0.0);
    CHECK(g.size() == 64);

    const ProductGrid g2(2, 1, 1.0, 4);
    CHECK(g2.x_count() == 16);
    CHECK(g2.y_count() == 4);
    for (std::size_t i = 0; i < g2.size(); ++i) CHECK(g2.flat(g2.node(i)) == i);
    CHECK(g2.x_radius(g2.x_flat({0, 0})) == doctest::Approx(std::sqrt(2.0) * 0.75));

    CHECK_THROWS(ProductGrid(1, 1, 1.0, 7));
    CHECK_THROWS(ProductGrid(3, 1, 1.0, 8));
    CHECK_THROWS(ProductGrid(1, 1, -1.0, 8));
}

TEST_CASE("grid function rejects negative or non-finite values") {
    const ProductGrid g(1, 1, 1.0, 2);
    CHECK_THROWS(GridFunction(g, {1.0, -1.0, 0.0, 0.0}));
    CHECK_THROWS(GridFunction(g, {1.0, std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0}));
    CHECK_THROWS(GridFunction(g, {1.0, 2.0}));
    const GridFunction f(g, {1.0, 2.0, 3.0, 4.0});
    CHECK(f.at(GridNode{{1, 0}, {0, 0}}) == 3.0);
    CHECK_THROWS(f.at(GridNode{{2, 0}, {0, 0}}));
}

TEST_CASE("lp_norm examples") {
    const ProductGrid g(1, 1, 1.0, 16);
    const GridFunction one(g, std::vector<double>(g.size(), 1.0));
    CHECK(lp_norm(one, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(lp_norm(GridFunction(g), 3.0) == 0.0);
    CHECK_THROWS(lp_norm(one, 0.5));
    CHECK_THROWS(lp_norm(one, std::numeric_limits<double>::quiet_NaN()));

    // brute-force oracle: plain double loop, no max scaling
    const auto f = random_function(g, 7);
    const double h = g.spacing();
    double acc = 0.0;
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) acc += std::pow(f.at(i, j), 3.0) * h * h;
    CHECK(rel_close(lp_norm(f, 3.0), std::cbrt(acc), 1e-12));
}

TEST_CASE("lp_norm properties") {
    const ProductGrid g(2, 1, 1.5, 6);
    const auto f = random_function(g, 11);
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
        CHECK(rel_close(lp_norm(f.scaled(2.5), p), 2.5 * lp_norm(f, p), 1e-13));
        CHECK(lp_norm(f.scaled(0.0), p) == 0.0);
    }
    // cell-constant function: closed form c * |box|^(1/p)
    const GridFunction c(g, std::vector<double>(g.size(), 0.3));
    CHECK(rel_close(lp_norm(c, 1.7), 0.3 * std::pow(27.0, 1.0 / 1.7), 1e-13));
    // very large values do not overflow
    const GridFunction big(g, std::vector<double>(g.size(), 1e300));
    CHECK(std::isfinite(lp_norm(big, 4.0)));
}

TEST_CASE("slice norms") {
    const ProductGrid g(1, 1, 1.0, 8);
    const GridFunction one(g, std::vector<double>(g.size(), 1.0));
    CHECK(slice_lp_norm_x(one, 1.0, {3, 0}) == doctest::Approx(2.0));
    CHECK_THROWS(slice_lp_norm_x(one, 1.0, {8, 0}));
    CHECK_THROWS(slice_lp_norm_y(one, 1.0, {-1, 0}));

    // tensor factorisation
    std::vector<double> a(8), b(8);
    for (int i = 0; i < 8; ++i) {
        a[i] = 1.0 + i;
        b[i] = 0.5 + (i % 3);
    }
    auto tensor = GridFunction::sample(g, [&](const auto& x, const auto& y) {
        const int i = static_cast<int>(std::floor((x[0] + 1.0) / g.spacing()));
        const int j = static_cast<int>(std::floor((y[0] + 1.0) / g.spacing()));
        return a[i] * b[j];
    });
    const double h = g.spacing();
    double bn = 0.0;
    for (double v : b) bn += std::pow(v, 1.5) * h;
    bn = std::pow(bn, 1.0 / 1.5);
    for (int i = 0; i < 8; ++i) CHECK(rel_close(slice_lp_norm_x(tensor, 1.5, {i, 0}), a[i] * bn, 1e-13));

    // brute-force oracle and slice consistency
    const ProductGrid g3(1, 2, 1.0, 6);
    const auto r = random_function(g3, 3);
    const double p = 2.5;
    const double hh = g3.spacing();
    double total = 0.0;
    for (int i = 0; i < 6; ++i) {
        double acc = 0.0;
        for (int j = 0; j < 6; ++j)
            for (int k = 0; k < 6; ++k) acc += std::pow(r.at(i, j * 6 + k), p) * hh * hh;
        CHECK(rel_close(slice_lp_norm_x(r, p, {i, 0}), std::pow(acc, 1.0 / p), 1e-12));
        total += acc * hh;
    }
    CHECK(rel_close(std::pow(total, 1.0 / p), lp_norm(r, p), 1e-12));
    const auto ny = slice_lp_norms_y(r, p);
    double ysum = 0.0;
    for (double v : ny) ysum += std::pow(v, p) * hh * hh;
    CHECK(rel_close(std::pow(ysum, 1.0 / p), lp_norm(r, p), 1e-12));
}

TEST_CASE("dilate") {
    const ProductGrid g(1, 1, 1.0, 16);
    const auto f = random_function(g, 5);
    const auto same = dilate(f, 1.0, 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(same[i] == f[i]);
    CHECK_THROWS(dilate(f, 0.0, 1.0));
    CHECK_THROWS(dilate(f, 1.0, -2.0));

    auto box = GridFunction::sample(g, [](const auto& x, const auto& y) {
        return std::abs(x[0]) <= 0.5 && std::abs(y[0]) <= 0.5 ? 1.0 : 0.0;
    });
    const auto d = dilate(box, 2.0, 1.0);
    int mismatches = 0;
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            const bool inside = std::abs(g.coordinate(i)) <= 0.25 && std::abs(g.coordinate(j)) <= 0.5;
            if ((d.at(i, j) == 1.0) != inside) ++mismatches;
        }
    // at most one boundary cell per x edge, per row
    CHECK(mismatches <= 2 * 16);

    // Gaussian bump: ||f(2x, y)||_p = 2^(-1/p) ||f||_p
    const ProductGrid big(1, 1, 8.0, 128);
    auto bump = GridFunction::sample(big, [](const auto& x, const auto& y) {
        return std::exp(-(x[0] * x[0] + y[0] * y[0]) / 2.0);
    });
    for (double p : {1.5, 2.0, 4.0}) {
        const double ratio = lp_norm(dilate(bump, 2.0, 1.0), p) / lp_norm(bump, p);
        CHECK(std::abs(ratio / std::pow(2.0, -1.0 / p) - 1.0) < 0.02);
    }
}

TEST_CASE("serialization round trip is exact") {
    for (auto enc : {GridEncoding::csv, GridEncoding::binary}) {
        const ProductGrid g(2, 1, 1.25, 4);
        auto f = random_function(g, 99);
        f = GridFunction(g, [&] {
            std::vector<double> v(f.values().begin(), f.values().end());
            v[0] = 1e-310;  // subnormal
            v[1] = 0.1;
            return v;
        }());
        std::stringstream ss;
        write_grid_function(ss, f, enc);
        const auto back = read_grid_function(ss);
        CHECK(back.grid() == g);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(back[i] == f[i]);
    }
    std::stringstream bad("{\"schema\":1,\"m\":1}\n");
    CHECK_THROWS(read_grid_function(bad));
}
