// Strong maximal operator over product windows B_delta x B_lambda, the
// partial operators M1 (x-group) and M2 (y-group), the composition check
// M f <= M1 M2 f, and the mixed-norm functional G.
//
// Windows are lattice balls centred on a cell: B_rho holds the cells whose
// integer offset e satisfies |e| h < rho. Sums are clipped to the box (f is
// zero outside) and divided by the unclipped cell count times h^dim.
#pragma once

#include <cstddef>
#include <vector>

#include "hls/grid.hpp"
#include "hls/kernel.hpp"

namespace hls {

struct WindowFamily {
    std::vector<double> x_radii;
    std::vector<double> y_radii;

    /// Radii h 2^k, k = 0..K, with K the first exponent whose window covers
    /// the whole box from any cell of that group.
    static WindowFamily dyadic(const ProductGrid& grid);
};

/// Number of integer vectors e in Z^dim with |e| < rho (rho in cell units).
[[nodiscard]] std::size_t lattice_ball_count(int dim, double rho);

/// Clipped window sums over the x-group (y frozen) for one radius.
[[nodiscard]] std::vector<double> window_sum_x(const ProductGrid& grid, std::span<const double> values,
                                               double radius);
/// Clipped window sums over the y-group (x frozen) for one radius.
[[nodiscard]] std::vector<double> window_sum_y(const ProductGrid& grid, std::span<const double> values,
                                               double radius);

[[nodiscard]] GridFunction strong_maximal(const GridFunction& f, const WindowFamily& w);
[[nodiscard]] GridFunction partial_maximal_x(const GridFunction& f, const WindowFamily& w);
[[nodiscard]] GridFunction partial_maximal_y(const GridFunction& f, const WindowFamily& w);

/// Reference path: every window of every point summed cell by cell.
/// O(points * windows * window size); small grids only.
[[nodiscard]] GridFunction strong_maximal_naive(const GridFunction& f, const WindowFamily& w);
[[nodiscard]] GridFunction partial_maximal_x_naive(const GridFunction& f, const WindowFamily& w);
[[nodiscard]] GridFunction partial_maximal_y_naive(const GridFunction& f, const WindowFamily& w);

struct CompositionReport {
    double max_ratio = 0.0;  // max of M f / M1(M2 f) over points with positive denominator
    GridNode argmax{};
    bool zero_consistent = true;  // M f == 0 wherever M1(M2 f) == 0
    [[nodiscard]] bool holds(double tol = 1e-12) const noexcept {
        return zero_consistent && max_ratio <= 1.0 + tol;
    }
};

[[nodiscard]] CompositionReport composition_check(const GridFunction& f, const WindowFamily& w);

/// n1(x) = ||M1 f(x, .)||_p over the y-group, n2(y) = ||M2 f(., y)||_p over
/// the x-group.
struct MixedSliceNorms {
    std::vector<double> n1;  // indexed by x flat index
    std::vector<double> n2;  // indexed by y flat index
};

[[nodiscard]] MixedSliceNorms mixed_slice_norms(const GridFunction& f, double p, const WindowFamily& w);

/// G(x, y) = n1(x) n2(y).
[[nodiscard]] GridFunction g_function(const GridFunction& f, const Exponents& exps, const WindowFamily& w);

struct GNormReport {
    double g_norm = 0.0;         // ||G f||_p on the product grid
    double f_norm = 0.0;         // ||f||_p
    double m1_norm = 0.0;        // ||M1 f||_p
    double m2_norm = 0.0;        // ||M2 f||_p
    double ratio = 0.0;          // ||G f||_p / ||f||_p^2, 0 for f == 0
    double fubini_deviation = 0.0;  // | ||G f|| - ||M1 f|| ||M2 f|| | / ||G f||
};

[[nodiscard]] GNormReport g_norm_bound(const GridFunction& f, const Exponents& exps);

}  // namespace hls
