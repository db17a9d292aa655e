#include "hls/kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace hls {

Exponents Exponents::make(int m, int n, double alpha, double beta, double p, double q) {
    if (m < 1 || n < 1) throw std::invalid_argument("dimensions must be positive");
    if (!(alpha > 0.0 && alpha < m))
        throw std::invalid_argument("alpha must lie in (0, m), got " + std::to_string(alpha));
    if (!(beta > 0.0 && beta < n))
        throw std::invalid_argument("beta must lie in (0, n), got " + std::to_string(beta));
    if (!(p > 1.0 && p < q && std::isfinite(q)))
        throw std::invalid_argument("exponents must satisfy 1 < p < q < inf");
    return Exponents{m, n, alpha, beta, p, q};
}

Exponents Exponents::with_derived_q(int m, int n, double alpha, double beta, double p) {
    const double inv_q = 1.0 / p - alpha / m;
    if (!(inv_q > 0.0))
        throw std::invalid_argument("1/p - alpha/m must be positive to define q");
    return make(m, n, alpha, beta, p, 1.0 / inv_q);
}

bool Exponents::balanced(double tol) const noexcept {
    const double gap = 1.0 / p - 1.0 / q;
    return std::abs(gap - alpha / m) <= tol && std::abs(alpha / m - beta / n) <= tol;
}

double unit_sphere_area(int dim) {
    switch (dim) {
        case 1: return 2.0;
        case 2: return 2.0 * std::numbers::pi;
        default: throw std::invalid_argument("only dimensions 1 and 2 are supported");
    }
}

double ball_measure(int dim, double r) {
    switch (dim) {
        case 1: return 2.0 * r;
        case 2: return std::numbers::pi * r * r;
        default: throw std::invalid_argument("only dimensions 1 and 2 are supported");
    }
}

double radial_power(double r, int dim, double exponent) noexcept {
    return std::pow(r, exponent - dim);
}

std::vector<double> radial_power_factor(const ProductGrid& grid, int dim, double exponent) {
    const std::size_t count = grid.group_count(dim);
    std::vector<double> out(count);
    const int N = grid.points_per_axis();
    for (std::size_t i = 0; i < count; ++i) {
        double r2 = 0.0;
        std::size_t rem = i;
        for (int k = 0; k < dim; ++k) {
            const double c = grid.coordinate(static_cast<int>(rem % N));
            r2 += c * c;
            rem /= N;
        }
        out[i] = radial_power(std::sqrt(r2), dim, exponent);
    }
    return out;
}

namespace {

// int_0^X int_0^Y (x^2 + y^2)^((a-2)/2) dy dx, split along the diagonal
// through (X, Y) and integrated radially in closed form.
double corner_rectangle_integral(double X, double Y, double a) {
    if (X <= 0.0 || Y <= 0.0) return 0.0;
    using boost::math::quadrature::gauss_kronrod;
    const double theta0 = std::atan2(Y, X);
    auto lower = [&](double th) { return std::pow(X / std::cos(th), a); };
    auto upper = [&](double th) { return std::pow(Y / std::sin(th), a); };
    const double i1 = gauss_kronrod<double, 31>::integrate(lower, 0.0, theta0, 12, 1e-14);
    const double i2 = gauss_kronrod<double, 31>::integrate(upper, theta0, std::numbers::pi / 2, 12, 1e-14);
    return (i1 + i2) / a;
}

}  // namespace

std::vector<double> radial_power_cell_average(const ProductGrid& grid, int dim, double exponent) {
    const int N = grid.points_per_axis();
    const double h = grid.spacing();
    const int half = N / 2;
    // Cell i along an axis spans |coordinate| in [lo, lo + h] with lo = |i - N/2 + 1/2| h - h/2.
    auto lo_of = [&](int i) { return std::abs(i - half + 0.5) * h - 0.5 * h; };

    if (dim == 1) {
        std::vector<double> out(N);
        for (int i = 0; i < N; ++i) {
            const double a = lo_of(i);
            const double b = a + h;
            out[i] = (std::pow(b, exponent) - std::pow(a, exponent)) / (exponent * h);
        }
        return out;
    }
    if (dim != 2) throw std::invalid_argument("only dimensions 1 and 2 are supported");

    // Corner integrals at every lattice vertex of one quadrant, then
    // inclusion-exclusion per cell.
    std::vector<double> corner(static_cast<std::size_t>(half + 1) * (half + 1));
    for (int i = 0; i <= half; ++i)
        for (int j = 0; j <= half; ++j)
            corner[static_cast<std::size_t>(i) * (half + 1) + j] = corner_rectangle_integral(i * h, j * h, exponent);
    auto F = [&](int i, int j) { return corner[static_cast<std::size_t>(i) * (half + 1) + j]; };

    std::vector<double> out(static_cast<std::size_t>(N) * N);
    for (int i = 0; i < N; ++i) {
        const int a = static_cast<int>(std::lround(lo_of(i) / h));
        for (int j = 0; j < N; ++j) {
            const int b = static_cast<int>(std::lround(lo_of(j) / h));
            const double integral = F(a + 1, b + 1) - F(a, b + 1) - F(a + 1, b) + F(a, b);
            out[static_cast<std::size_t>(i) * N + j] = integral / (h * h);
        }
    }
    return out;
}

namespace {

GridFunction outer_product(const ProductGrid& grid, const std::vector<double>& xf,
                           const std::vector<double>& yf) {
    std::vector<double> values(grid.size());
    for (std::size_t xi = 0; xi < grid.x_count(); ++xi)
        for (std::size_t yi = 0; yi < grid.y_count(); ++yi)
            values[grid.flat(xi, yi)] = xf[xi] * yf[yi];
    return GridFunction(grid, std::move(values));
}

}  // namespace

GridFunction riesz_kernel(const ProductGrid& grid, const Exponents& exps) {
    if (exps.m != grid.m() || exps.n != grid.n())
        throw std::invalid_argument("exponent dimensions do not match the grid");
    return outer_product(grid, radial_power_factor(grid, grid.m(), exps.alpha),
                         radial_power_factor(grid, grid.n(), exps.beta));
}

GridFunction riesz_kernel_cell_average(const ProductGrid& grid, const Exponents& exps) {
    if (exps.m != grid.m() || exps.n != grid.n())
        throw std::invalid_argument("exponent dimensions do not match the grid");
    return outer_product(grid, radial_power_cell_average(grid, grid.m(), exps.alpha),
                         radial_power_cell_average(grid, grid.n(), exps.beta));
}

double LayerCake::profile(double r) const noexcept { return radial_power(r, dim, profile_exponent); }

double LayerCake::step(double r) const noexcept {
    double s = 0.0;
    for (const auto& level : levels)
        if (r <= level.radius) s += level.coefficient;
    return s;
}

double LayerCake::level_sum() const noexcept {
    double s = 0.0;
    for (const auto& level : levels) s += level.coefficient * ball_measure(dim, level.radius);
    return s;
}

double LayerCake::envelope_factor() const noexcept { return std::pow(2.0, dim - profile_exponent); }

double LayerCake::lower_limit() const noexcept {
    return truncation_radius * std::pow(2.0, -static_cast<double>(levels.size()));
}

LayerCake layer_cake(double profile_exponent, int dim, double truncation_radius, int depth) {
    if (dim < 1 || dim > 2) throw std::invalid_argument("only dimensions 1 and 2 are supported");
    if (!(profile_exponent > 0.0 && profile_exponent < dim))
        throw std::invalid_argument("profile exponent must lie in (0, dim)");
    if (!(truncation_radius > 0.0)) throw std::invalid_argument("truncation radius must be positive");
    if (depth < 1) throw std::invalid_argument("depth must be at least 1");

    LayerCake cake{dim, profile_exponent, truncation_radius, {}};
    cake.levels.reserve(depth);
    // Level j covers B(R 2^-j); the partial sums up to j equal the profile at
    // the inner radius R 2^-(j+1), so the step sits above the profile.
    double previous = 0.0;
    for (int j = 0; j < depth; ++j) {
        const double radius = truncation_radius * std::ldexp(1.0, -j);
        const double inner = cake.profile(radius / 2.0);
        cake.levels.push_back({inner - previous, radius});
        previous = inner;
    }
    return cake;
}

}  // namespace hls
