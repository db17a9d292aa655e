#include "hls/families.hpp"

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace hls {

std::string_view family_name(Family f) noexcept {
    switch (f) {
        case Family::zero: return "zero";
        case Family::gaussian: return "gaussian";
        case Family::box: return "box";
        case Family::tensor_box: return "tensor-box";
        case Family::spike: return "spike";
        case Family::random: return "random";
    }
    return "unknown";
}

std::optional<Family> parse_family(std::string_view name) noexcept {
    for (Family f : {Family::zero, Family::gaussian, Family::box, Family::tensor_box, Family::spike, Family::random})
        if (family_name(f) == name) return f;
    return std::nullopt;
}

namespace {

using Point = std::array<double, 2>;

double norm2(const Point& v, int dim) {
    double r = 0.0;
    for (int k = 0; k < dim; ++k) r += v[k] * v[k];
    return r;
}

}  // namespace

GridFunction family_member(const ProductGrid& grid, const FamilySpec& spec, double s, double t) {
    if (!(s > 0.0) || !(t > 0.0)) throw std::invalid_argument("dilation factors must be positive");
    if (!(spec.width > 0.0)) throw std::invalid_argument("family width must be positive");
    const int m = grid.m();
    const int n = grid.n();
    const double w = spec.width;
    auto scale = [](const Point& p, double f) { return Point{p[0] * f, p[1] * f}; };

    switch (spec.kind) {
        case Family::zero:
            return GridFunction(grid);
        case Family::gaussian:
            return GridFunction::sample(grid, [&](const Point& x, const Point& y) {
                const double r2 = norm2(scale(x, s), m) + norm2(scale(y, t), n);
                return std::exp(-r2 / (2.0 * w * w));
            });
        case Family::box:
            return GridFunction::sample(grid, [&](const Point& x, const Point& y) {
                for (int k = 0; k < m; ++k)
                    if (std::abs(s * x[k]) > w) return 0.0;
                for (int k = 0; k < n; ++k)
                    if (std::abs(t * y[k]) > w) return 0.0;
                return 1.0;
            });
        case Family::tensor_box:
            // a(x) b(y) with off-centre supports and unequal heights.
            return GridFunction::sample(grid, [&](const Point& x, const Point& y) {
                for (int k = 0; k < m; ++k)
                    if (s * x[k] < -0.5 * w || s * x[k] > w) return 0.0;
                for (int k = 0; k < n; ++k)
                    if (t * y[k] < -w || t * y[k] > w / 3.0) return 0.0;
                return 2.0;
            });
        case Family::spike: {
            std::vector<double> v(grid.size(), 0.0);
            const int c = grid.points_per_axis() / 2;
            const GridNode centre{{c, c}, {c, c}};
            v[grid.flat(centre)] = 1.0 / (grid.cell_volume() * std::pow(s, m) * std::pow(t, n));
            return GridFunction(grid, std::move(v));
        }
        case Family::random: {
            const int B = spec.random_blocks;
            if (B < 1) throw std::invalid_argument("random family needs at least one block per axis");
            const int rank = m + n;
            std::size_t count = 1;
            for (int a = 0; a < rank; ++a) count *= static_cast<std::size_t>(B);
            std::mt19937_64 rng(spec.seed);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            std::vector<double> blocks(count);
            for (double& b : blocks) b = unit(rng);
            const double block = 2.0 * w / B;
            auto index = [&](double c) {
                const double k = std::floor((c + w) / block);
                return (k < 0.0 || k >= B) ? -1 : static_cast<int>(k);
            };
            return GridFunction::sample(grid, [&](const Point& x, const Point& y) {
                std::size_t flat = 0;
                for (int k = 0; k < m; ++k) {
                    const int i = index(s * x[k]);
                    if (i < 0) return 0.0;
                    flat = flat * B + static_cast<std::size_t>(i);
                }
                for (int k = 0; k < n; ++k) {
                    const int i = index(t * y[k]);
                    if (i < 0) return 0.0;
                    flat = flat * B + static_cast<std::size_t>(i);
                }
                return blocks[flat];
            });
        }
    }
    throw std::invalid_argument("unknown family");
}

}  // namespace hls
