// The product Riesz kernel |x|^(alpha-m) |y|^(beta-n) on a ProductGrid,
// the exponent tuple it is parameterised by, and dyadic layer-cake
// approximations of radial power-law profiles.
#pragma once

#include <vector>

#include "hls/grid.hpp"

namespace hls {

/// The tuple (m, n, alpha, beta, p, q).
///
/// Construction enforces 0 < alpha < m, 0 < beta < n and 1 < p < q < inf.
/// The balance relation 1/p - 1/q = alpha/m = beta/n is *not* required here;
/// unbalanced tuples are needed for the necessity sweeps.
struct Exponents {
    int m = 1;
    int n = 1;
    double alpha = 0.5;
    double beta = 0.5;
    double p = 4.0 / 3.0;
    double q = 4.0;

    static Exponents make(int m, int n, double alpha, double beta, double p, double q);
    /// q from 1/q = 1/p - alpha/m.
    static Exponents with_derived_q(int m, int n, double alpha, double beta, double p);

    [[nodiscard]] bool balanced(double tol = 1e-12) const noexcept;
    /// Hoelder conjugate p / (p - 1).
    [[nodiscard]] double conjugate_p() const noexcept { return p / (p - 1.0); }
};

/// Surface measure of the unit sphere in R^dim (2 for dim 1, 2 pi for dim 2).
[[nodiscard]] double unit_sphere_area(int dim);
/// Lebesgue measure of the Euclidean ball of radius r in R^dim.
[[nodiscard]] double ball_measure(int dim, double r);

/// r^(exponent - dim), the radial profile of one kernel factor.
[[nodiscard]] double radial_power(double r, int dim, double exponent) noexcept;

/// |x|^(exponent - dim) at every cell centre of one coordinate group
/// (indexed by group flat index).
[[nodiscard]] std::vector<double> radial_power_factor(const ProductGrid& grid, int dim, double exponent);

/// Cell averages of |x|^(exponent - dim) over every cell of one group.
[[nodiscard]] std::vector<double> radial_power_cell_average(const ProductGrid& grid, int dim,
                                                            double exponent);

/// Omega(x, y) = |x|^(alpha-m) |y|^(beta-n) sampled at cell centres.
[[nodiscard]] GridFunction riesz_kernel(const ProductGrid& grid, const Exponents& exps);

/// Omega averaged over each cell. Convolving a cell-constant f with this
/// kernel gives the exact whole-cell integral at the staggered output nodes.
[[nodiscard]] GridFunction riesz_kernel_cell_average(const ProductGrid& grid, const Exponents& exps);

struct LayerLevel {
    double coefficient;
    double radius;
};

/// Step function sum_j a_j 1_{B(r_j)} over origin-centred balls with
/// r_j = R 2^-j that dominates the profile r^(exponent - dim).
struct LayerCake {
    int dim = 1;
    double profile_exponent = 0.5;
    double truncation_radius = 1.0;
    std::vector<LayerLevel> levels;

    [[nodiscard]] double profile(double r) const noexcept;
    [[nodiscard]] double step(double r) const noexcept;
    /// sum_j a_j |B(r_j)|, the integral of the step function.
    [[nodiscard]] double level_sum() const noexcept;
    /// 2^(dim - exponent): profile >= step / envelope_factor on the valid range.
    [[nodiscard]] double envelope_factor() const noexcept;
    /// Left end of the range (R 2^-depth, R] on which the envelope holds.
    [[nodiscard]] double lower_limit() const noexcept;
};

[[nodiscard]] LayerCake layer_cake(double profile_exponent, int dim, double truncation_radius,
                                   int depth = 40);

}  // namespace hls
