// Discrete product-grid geometry for R^m x R^n, sampled nonnegative
// functions, midpoint quadrature and the full / slice-wise L^p norms.
#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hls {

/// Multi-index of a cell in one coordinate group (only the first `dim`
/// entries are meaningful).
using AxisIndex = std::array<int, 2>;

/// A cell of the product grid, split into its x-group and y-group indices.
struct GridNode {
    AxisIndex x{};
    AxisIndex y{};
    friend bool operator==(const GridNode&, const GridNode&) = default;
};

/// Uniform cell-centred sampling of [-L, L]^m x [-L, L]^n.
///
/// Cell centres sit at (i + 1/2) h - L with h = 2L / N. N is even, so no
/// centre coincides with a coordinate origin. Storage is row-major with the
/// x-group axes outermost: flat = x_flat * N^n + y_flat.
class ProductGrid {
public:
    ProductGrid(int m, int n, double half_width, int points_per_axis);

    [[nodiscard]] int m() const noexcept { return m_; }
    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] int rank() const noexcept { return m_ + n_; }
    [[nodiscard]] double half_width() const noexcept { return half_width_; }
    [[nodiscard]] int points_per_axis() const noexcept { return points_; }
    [[nodiscard]] double spacing() const noexcept { return spacing_; }

    /// Volume of one cell, h^(m+n).
    [[nodiscard]] double cell_volume() const noexcept;
    [[nodiscard]] double group_cell_volume(int dim) const noexcept;

    [[nodiscard]] std::size_t x_count() const noexcept { return x_count_; }
    [[nodiscard]] std::size_t y_count() const noexcept { return y_count_; }
    [[nodiscard]] std::size_t size() const noexcept { return x_count_ * y_count_; }
    [[nodiscard]] std::size_t group_count(int dim) const noexcept;

    [[nodiscard]] double coordinate(int i) const noexcept {
        return (static_cast<double>(i) + 0.5) * spacing_ - half_width_;
    }

    [[nodiscard]] bool contains(const GridNode& node) const noexcept;
    [[nodiscard]] std::size_t x_flat(const AxisIndex& x) const noexcept;
    [[nodiscard]] std::size_t y_flat(const AxisIndex& y) const noexcept;
    [[nodiscard]] AxisIndex x_unflat(std::size_t xi) const noexcept;
    [[nodiscard]] AxisIndex y_unflat(std::size_t yi) const noexcept;
    [[nodiscard]] std::size_t flat(std::size_t xi, std::size_t yi) const noexcept {
        return xi * y_count_ + yi;
    }
    [[nodiscard]] std::size_t flat(const GridNode& node) const noexcept {
        return flat(x_flat(node.x), y_flat(node.y));
    }
    [[nodiscard]] GridNode node(std::size_t flat_index) const noexcept;

    /// Euclidean norm of the cell-centre coordinates of a group index.
    [[nodiscard]] double x_radius(std::size_t xi) const noexcept;
    [[nodiscard]] double y_radius(std::size_t yi) const noexcept;

    friend bool operator==(const ProductGrid&, const ProductGrid&) = default;

private:
    int m_;
    int n_;
    double half_width_;
    int points_;
    double spacing_;
    std::size_t x_count_;
    std::size_t y_count_;
};

/// Nonnegative samples of |f| on a ProductGrid.
class GridFunction {
public:
    explicit GridFunction(ProductGrid grid);  // identically zero
    GridFunction(ProductGrid grid, std::vector<double> values);

    /// Samples `fn(x, y)` at every cell centre; x and y hold the group
    /// coordinates (unused trailing entries are zero).
    static GridFunction sample(
        const ProductGrid& grid,
        const std::function<double(const std::array<double, 2>&, const std::array<double, 2>&)>& fn);

    [[nodiscard]] const ProductGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }
    [[nodiscard]] double at(const GridNode& node) const;
    [[nodiscard]] double at(std::size_t xi, std::size_t yi) const noexcept {
        return values_[grid_.flat(xi, yi)];
    }
    [[nodiscard]] bool is_zero() const noexcept;
    [[nodiscard]] double max_value() const noexcept;

    [[nodiscard]] GridFunction scaled(double c) const;

private:
    ProductGrid grid_;
    std::vector<double> values_;
};

/// (sum_cells f^p h^(m+n))^(1/p).
[[nodiscard]] double lp_norm(const GridFunction& f, double p);

/// (int_{R^n} g(x, v)^p dv)^(1/p) at a fixed x-group node.
[[nodiscard]] double slice_lp_norm_x(const GridFunction& g, double p, const AxisIndex& x);
/// (int_{R^m} g(u, y)^p du)^(1/p) at a fixed y-group node.
[[nodiscard]] double slice_lp_norm_y(const GridFunction& g, double p, const AxisIndex& y);

/// All x-slice norms, indexed by x_flat (size N^m).
[[nodiscard]] std::vector<double> slice_lp_norms_x(const GridFunction& g, double p);
/// All y-slice norms, indexed by y_flat (size N^n).
[[nodiscard]] std::vector<double> slice_lp_norms_y(const GridFunction& g, double p);

/// Discrete l^p norm of a group vector with cell weight h^dim.
[[nodiscard]] double weighted_lp_norm(std::span<const double> values, double p, double cell_weight);

/// Anisotropic dilation g(x, y) = f(s x, t y), nearest-cell lookup with zero
/// extension outside the box.
[[nodiscard]] GridFunction dilate(const GridFunction& f, double s, double t);

}  // namespace hls
