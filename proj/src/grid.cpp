#include "hls/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hls {

namespace {

std::size_t ipow(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

void require_exponent(double p) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw std::invalid_argument("L^p norm requires finite p >= 1, got " + std::to_string(p));
}

}  // namespace

ProductGrid::ProductGrid(int m, int n, double half_width, int points_per_axis)
    : m_(m), n_(n), half_width_(half_width), points_(points_per_axis) {
    if (m < 1 || m > 2 || n < 1 || n > 2)
        throw std::invalid_argument("group dimensions must be 1 or 2");
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("half width must be positive");
    if (points_per_axis < 2 || points_per_axis % 2 != 0)
        throw std::invalid_argument("points per axis must be even and >= 2");
    spacing_ = 2.0 * half_width / points_per_axis;
    x_count_ = ipow(static_cast<std::size_t>(points_), m_);
    y_count_ = ipow(static_cast<std::size_t>(points_), n_);
}

double ProductGrid::cell_volume() const noexcept { return std::pow(spacing_, m_ + n_); }

double ProductGrid::group_cell_volume(int dim) const noexcept { return std::pow(spacing_, dim); }

std::size_t ProductGrid::group_count(int dim) const noexcept {
    return ipow(static_cast<std::size_t>(points_), dim);
}

bool ProductGrid::contains(const GridNode& node) const noexcept {
    auto in = [this](const AxisIndex& a, int dim) {
        for (int k = 0; k < dim; ++k)
            if (a[k] < 0 || a[k] >= points_) return false;
        return true;
    };
    return in(node.x, m_) && in(node.y, n_);
}

std::size_t ProductGrid::x_flat(const AxisIndex& x) const noexcept {
    return m_ == 1 ? static_cast<std::size_t>(x[0])
                   : static_cast<std::size_t>(x[0]) * points_ + static_cast<std::size_t>(x[1]);
}

std::size_t ProductGrid::y_flat(const AxisIndex& y) const noexcept {
    return n_ == 1 ? static_cast<std::size_t>(y[0])
                   : static_cast<std::size_t>(y[0]) * points_ + static_cast<std::size_t>(y[1]);
}

AxisIndex ProductGrid::x_unflat(std::size_t xi) const noexcept {
    if (m_ == 1) return {static_cast<int>(xi), 0};
    return {static_cast<int>(xi / points_), static_cast<int>(xi % points_)};
}

AxisIndex ProductGrid::y_unflat(std::size_t yi) const noexcept {
    if (n_ == 1) return {static_cast<int>(yi), 0};
    return {static_cast<int>(yi / points_), static_cast<int>(yi % points_)};
}

GridNode ProductGrid::node(std::size_t flat_index) const noexcept {
    return {x_unflat(flat_index / y_count_), y_unflat(flat_index % y_count_)};
}

double ProductGrid::x_radius(std::size_t xi) const noexcept {
    const AxisIndex a = x_unflat(xi);
    double r2 = 0.0;
    for (int k = 0; k < m_; ++k) r2 += coordinate(a[k]) * coordinate(a[k]);
    return std::sqrt(r2);
}

double ProductGrid::y_radius(std::size_t yi) const noexcept {
    const AxisIndex a = y_unflat(yi);
    double r2 = 0.0;
    for (int k = 0; k < n_; ++k) r2 += coordinate(a[k]) * coordinate(a[k]);
    return std::sqrt(r2);
}

GridFunction::GridFunction(ProductGrid grid) : grid_(grid), values_(grid.size(), 0.0) {}

GridFunction::GridFunction(ProductGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw std::invalid_argument("value count " + std::to_string(values_.size()) +
                                    " does not match grid size " + std::to_string(grid_.size()));
    for (double v : values_)
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("grid function values must be finite and nonnegative");
}

GridFunction GridFunction::sample(
    const ProductGrid& grid,
    const std::function<double(const std::array<double, 2>&, const std::array<double, 2>&)>& fn) {
    std::vector<double> values(grid.size());
    for (std::size_t xi = 0; xi < grid.x_count(); ++xi) {
        const AxisIndex xa = grid.x_unflat(xi);
        std::array<double, 2> x{};
        for (int k = 0; k < grid.m(); ++k) x[k] = grid.coordinate(xa[k]);
        for (std::size_t yi = 0; yi < grid.y_count(); ++yi) {
            const AxisIndex ya = grid.y_unflat(yi);
            std::array<double, 2> y{};
            for (int k = 0; k < grid.n(); ++k) y[k] = grid.coordinate(ya[k]);
            values[grid.flat(xi, yi)] = fn(x, y);
        }
    }
    return GridFunction(grid, std::move(values));
}

double GridFunction::at(const GridNode& node) const {
    if (!grid_.contains(node)) throw std::out_of_range("grid node outside the box");
    return values_[grid_.flat(node)];
}

bool GridFunction::is_zero() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

double GridFunction::max_value() const noexcept {
    return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

GridFunction GridFunction::scaled(double c) const {
    if (!(c >= 0.0)) throw std::invalid_argument("scale factor must be nonnegative");
    std::vector<double> v(values_);
    for (double& x : v) x *= c;
    return GridFunction(grid_, std::move(v));
}

double weighted_lp_norm(std::span<const double> values, double p, double cell_weight) {
    require_exponent(p);
    double peak = 0.0;
    for (double v : values) {
        if (std::isnan(v)) throw std::invalid_argument("NaN in L^p norm input");
        peak = std::max(peak, std::abs(v));
    }
    if (peak == 0.0) return 0.0;
    double acc = 0.0;
    for (double v : values) acc += std::pow(std::abs(v) / peak, p);
    return peak * std::pow(acc * cell_weight, 1.0 / p);
}

double lp_norm(const GridFunction& f, double p) {
    return weighted_lp_norm(f.values(), p, f.grid().cell_volume());
}

std::vector<double> slice_lp_norms_x(const GridFunction& g, double p) {
    require_exponent(p);
    const ProductGrid& grid = g.grid();
    const double w = grid.group_cell_volume(grid.n());
    std::vector<double> out(grid.x_count());
    for (std::size_t xi = 0; xi < grid.x_count(); ++xi)
        out[xi] = weighted_lp_norm(g.values().subspan(xi * grid.y_count(), grid.y_count()), p, w);
    return out;
}

std::vector<double> slice_lp_norms_y(const GridFunction& g, double p) {
    require_exponent(p);
    const ProductGrid& grid = g.grid();
    const double w = grid.group_cell_volume(grid.m());
    std::vector<double> out(grid.y_count());
    std::vector<double> column(grid.x_count());
    for (std::size_t yi = 0; yi < grid.y_count(); ++yi) {
        for (std::size_t xi = 0; xi < grid.x_count(); ++xi) column[xi] = g.at(xi, yi);
        out[yi] = weighted_lp_norm(column, p, w);
    }
    return out;
}

double slice_lp_norm_x(const GridFunction& g, double p, const AxisIndex& x) {
    const ProductGrid& grid = g.grid();
    for (int k = 0; k < grid.m(); ++k)
        if (x[k] < 0 || x[k] >= grid.points_per_axis())
            throw std::out_of_range("x node outside the grid");
    const std::size_t xi = grid.x_flat(x);
    return weighted_lp_norm(g.values().subspan(xi * grid.y_count(), grid.y_count()), p,
                            grid.group_cell_volume(grid.n()));
}

double slice_lp_norm_y(const GridFunction& g, double p, const AxisIndex& y) {
    const ProductGrid& grid = g.grid();
    for (int k = 0; k < grid.n(); ++k)
        if (y[k] < 0 || y[k] >= grid.points_per_axis())
            throw std::out_of_range("y node outside the grid");
    const std::size_t yi = grid.y_flat(y);
    std::vector<double> column(grid.x_count());
    for (std::size_t xi = 0; xi < grid.x_count(); ++xi) column[xi] = g.at(xi, yi);
    return weighted_lp_norm(column, p, grid.group_cell_volume(grid.m()));
}

GridFunction dilate(const GridFunction& f, double s, double t) {
    if (!(s > 0.0) || !(t > 0.0) || !std::isfinite(s) || !std::isfinite(t))
        throw std::invalid_argument("dilation factors must be positive");
    const ProductGrid& grid = f.grid();
    const double h = grid.spacing();
    const double L = grid.half_width();
    const int N = grid.points_per_axis();

    // Source cell index along one axis for a scaled coordinate, or -1 if outside.
    auto source = [&](int i, double factor) {
        const double c = factor * grid.coordinate(i);
        const double idx = std::floor((c + L) / h);
        return (idx < 0.0 || idx >= N) ? -1 : static_cast<int>(idx);
    };

    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t xi = 0; xi < grid.x_count(); ++xi) {
        const AxisIndex xa = grid.x_unflat(xi);
        AxisIndex xs{};
        bool inside = true;
        for (int k = 0; k < grid.m(); ++k) {
            xs[k] = source(xa[k], s);
            inside = inside && xs[k] >= 0;
        }
        if (!inside) continue;
        const std::size_t sx = grid.x_flat(xs);
        for (std::size_t yi = 0; yi < grid.y_count(); ++yi) {
            const AxisIndex ya = grid.y_unflat(yi);
            AxisIndex ys{};
            bool yin = true;
            for (int k = 0; k < grid.n(); ++k) {
                ys[k] = source(ya[k], t);
                yin = yin && ys[k] >= 0;
            }
            if (yin) out[grid.flat(xi, yi)] = f.at(sx, grid.y_flat(ys));
        }
    }
    return GridFunction(grid, std::move(out));
}

}  // namespace hls
