#include "hls/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hls {

namespace {

// Radii are multiples of h; strictness |e| < rho is decided with a small
// margin so that rho = 2^k computed in floating point excludes |e| = 2^k.
constexpr double kMembershipMargin = 1e-9;

bool inside_ball(long e2, double rho) { return static_cast<double>(e2) < rho * rho - kMembershipMargin; }

// Largest w >= 0 with w^2 + base2 < rho^2, or -1 if none.
long half_width(long base2, double rho) {
    if (!inside_ball(base2, rho)) return -1;
    long w = static_cast<long>(std::floor(std::sqrt(std::max(0.0, rho * rho - static_cast<double>(base2)))));
    while (w > 0 && !inside_ball(base2 + w * w, rho)) --w;
    while (inside_ball(base2 + (w + 1) * (w + 1), rho)) ++w;
    return w;
}

// Calls fn(source) for every group index in the clipped window around g,
// in lexicographic offset order.
template <typename Fn>
void for_each_window_source(int dim, int N, std::size_t g, double rho, Fn&& fn) {
    if (dim == 1) {
        const long w = half_width(0, rho);
        const long c = static_cast<long>(g);
        for (long s = std::max(0L, c - w); s <= std::min<long>(N - 1, c + w); ++s) fn(static_cast<std::size_t>(s));
        return;
    }
    const long g1 = static_cast<long>(g) / N;
    const long g2 = static_cast<long>(g) % N;
    const long w1 = half_width(0, rho);
    for (long s1 = std::max(0L, g1 - w1); s1 <= std::min<long>(N - 1, g1 + w1); ++s1) {
        const long e1 = s1 - g1;
        const long w2 = half_width(e1 * e1, rho);
        for (long s2 = std::max(0L, g2 - w2); s2 <= std::min<long>(N - 1, g2 + w2); ++s2)
            fn(static_cast<std::size_t>(s1 * N + s2));
    }
}

double cell_units(const ProductGrid& grid, double radius) { return radius / grid.spacing(); }

}  // namespace

std::size_t lattice_ball_count(int dim, double rho) {
    if (dim == 1) {
        const long w = half_width(0, rho);
        return w < 0 ? 0 : static_cast<std::size_t>(2 * w + 1);
    }
    if (dim != 2) throw std::invalid_argument("only dimensions 1 and 2 are supported");
    const long w1 = half_width(0, rho);
    std::size_t count = 0;
    for (long e1 = -w1; e1 <= w1; ++e1) count += static_cast<std::size_t>(2 * half_width(e1 * e1, rho) + 1);
    return count;
}

WindowFamily WindowFamily::dyadic(const ProductGrid& grid) {
    const double h = grid.spacing();
    const int N = grid.points_per_axis();
    auto radii = [&](int dim) {
        // Farthest in-box offset from any cell is (N - 1) sqrt(dim) cells.
        const double reach = (N - 1) * std::sqrt(static_cast<double>(dim));
        std::vector<double> r;
        for (int k = 0;; ++k) {
            r.push_back(h * std::ldexp(1.0, k));
            if (std::ldexp(1.0, k) > reach + kMembershipMargin) break;
        }
        return r;
    };
    return WindowFamily{radii(grid.m()), radii(grid.n())};
}

std::vector<double> window_sum_x(const ProductGrid& grid, std::span<const double> values, double radius) {
    if (values.size() != grid.size()) throw std::invalid_argument("value count does not match grid");
    const double rho = cell_units(grid, radius);
    const std::size_t ny = grid.y_count();
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t g = 0; g < grid.x_count(); ++g) {
        double* dst = out.data() + g * ny;
        for_each_window_source(grid.m(), grid.points_per_axis(), g, rho, [&](std::size_t s) {
            const double* src = values.data() + s * ny;
            for (std::size_t o = 0; o < ny; ++o) dst[o] += src[o];
        });
    }
    return out;
}

std::vector<double> window_sum_y(const ProductGrid& grid, std::span<const double> values, double radius) {
    if (values.size() != grid.size()) throw std::invalid_argument("value count does not match grid");
    const double rho = cell_units(grid, radius);
    const std::size_t ny = grid.y_count();
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t o = 0; o < grid.x_count(); ++o) {
        const double* row = values.data() + o * ny;
        double* dst = out.data() + o * ny;
        for (std::size_t g = 0; g < ny; ++g) {
            double acc = 0.0;
            for_each_window_source(grid.n(), grid.points_per_axis(), g, rho, [&](std::size_t s) { acc += row[s]; });
            dst[g] = acc;
        }
    }
    return out;
}

GridFunction strong_maximal(const GridFunction& f, const WindowFamily& w) {
    const ProductGrid& grid = f.grid();
    std::vector<double> best(grid.size(), 0.0);
    for (double delta : w.x_radii) {
        auto xs = window_sum_x(grid, f.values(), delta);
        const double cx = static_cast<double>(lattice_ball_count(grid.m(), cell_units(grid, delta)));
        for (double lambda : w.y_radii) {
            const auto sums = window_sum_y(grid, xs, lambda);
            const double cy = static_cast<double>(lattice_ball_count(grid.n(), cell_units(grid, lambda)));
            const double measure = cx * cy;
            for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::max(best[i], sums[i] / measure);
        }
    }
    return GridFunction(grid, std::move(best));
}

GridFunction partial_maximal_x(const GridFunction& f, const WindowFamily& w) {
    const ProductGrid& grid = f.grid();
    std::vector<double> best(grid.size(), 0.0);
    for (double delta : w.x_radii) {
        const auto sums = window_sum_x(grid, f.values(), delta);
        const double c = static_cast<double>(lattice_ball_count(grid.m(), cell_units(grid, delta)));
        for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::max(best[i], sums[i] / c);
    }
    return GridFunction(grid, std::move(best));
}

GridFunction partial_maximal_y(const GridFunction& f, const WindowFamily& w) {
    const ProductGrid& grid = f.grid();
    std::vector<double> best(grid.size(), 0.0);
    for (double lambda : w.y_radii) {
        const auto sums = window_sum_y(grid, f.values(), lambda);
        const double c = static_cast<double>(lattice_ball_count(grid.n(), cell_units(grid, lambda)));
        for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::max(best[i], sums[i] / c);
    }
    return GridFunction(grid, std::move(best));
}

GridFunction strong_maximal_naive(const GridFunction& f, const WindowFamily& w) {
    const ProductGrid& grid = f.grid();
    const int N = grid.points_per_axis();
    std::vector<double> best(grid.size(), 0.0);
    for (std::size_t xi = 0; xi < grid.x_count(); ++xi) {
        for (std::size_t yi = 0; yi < grid.y_count(); ++yi) {
            double m = 0.0;
            for (double delta : w.x_radii) {
                const double rx = cell_units(grid, delta);
                for (double lambda : w.y_radii) {
                    const double ry = cell_units(grid, lambda);
                    double acc = 0.0;
                    for_each_window_source(grid.m(), N, xi, rx, [&](std::size_t sx) {
                        for_each_window_source(grid.n(), N, yi, ry,
                                               [&](std::size_t sy) { acc += f.at(sx, sy); });
                    });
                    const double measure = static_cast<double>(lattice_ball_count(grid.m(), rx)) *
                                           static_cast<double>(lattice_ball_count(grid.n(), ry));
                    m = std::max(m, acc / measure);
                }
            }
            best[grid.flat(xi, yi)] = m;
        }
    }
    return GridFunction(grid, std::move(best));
}

GridFunction partial_maximal_x_naive(const GridFunction& f, const WindowFamily& w) {
    const ProductGrid& grid = f.grid();
    std::vector<double> best(grid.size(), 0.0);
    for (std::size_t xi = 0; xi < grid.x_count(); ++xi)
        for (std::size_t yi = 0; yi < grid.y_count(); ++yi) {
            double m = 0.0;
            for (double delta : w.x_radii) {
                const double rx = cell_units(grid, delta);
                double acc = 0.0;
                for_each_window_source(grid.m(), grid.points_per_axis(), xi, rx,
                                       [&](std::size_t sx) { acc += f.at(sx, yi); });
                m = std::max(m, acc / static_cast<double>(lattice_ball_count(grid.m(), rx)));
            }
            best[grid.flat(xi, yi)] = m;
        }
    return GridFunction(grid, std::move(best));
}

GridFunction partial_maximal_y_naive(const GridFunction& f, const WindowFamily& w) {
    const ProductGrid& grid = f.grid();
    std::vector<double> best(grid.size(), 0.0);
    for (std::size_t xi = 0; xi < grid.x_count(); ++xi)
        for (std::size_t yi = 0; yi < grid.y_count(); ++yi) {
            double m = 0.0;
            for (double lambda : w.y_radii) {
                const double ry = cell_units(grid, lambda);
                double acc = 0.0;
                for_each_window_source(grid.n(), grid.points_per_axis(), yi, ry,
                                       [&](std::size_t sy) { acc += f.at(xi, sy); });
                m = std::max(m, acc / static_cast<double>(lattice_ball_count(grid.n(), ry)));
            }
            best[grid.flat(xi, yi)] = m;
        }
    return GridFunction(grid, std::move(best));
}

CompositionReport composition_check(const GridFunction& f, const WindowFamily& w) {
    const auto strong = strong_maximal(f, w);
    const auto iterated = partial_maximal_x(partial_maximal_y(f, w), w);
    CompositionReport report;
    for (std::size_t i = 0; i < strong.values().size(); ++i) {
        if (iterated[i] == 0.0) {
            if (strong[i] != 0.0) report.zero_consistent = false;
            continue;
        }
        const double ratio = strong[i] / iterated[i];
        if (ratio > report.max_ratio) {
            report.max_ratio = ratio;
            report.argmax = f.grid().node(i);
        }
    }
    return report;
}

MixedSliceNorms mixed_slice_norms(const GridFunction& f, double p, const WindowFamily& w) {
    return {slice_lp_norms_x(partial_maximal_x(f, w), p), slice_lp_norms_y(partial_maximal_y(f, w), p)};
}

GridFunction g_function(const GridFunction& f, const Exponents& exps, const WindowFamily& w) {
    const ProductGrid& grid = f.grid();
    const auto norms = mixed_slice_norms(f, exps.p, w);
    std::vector<double> values(grid.size());
    for (std::size_t xi = 0; xi < grid.x_count(); ++xi)
        for (std::size_t yi = 0; yi < grid.y_count(); ++yi)
            values[grid.flat(xi, yi)] = norms.n1[xi] * norms.n2[yi];
    return GridFunction(grid, std::move(values));
}

GNormReport g_norm_bound(const GridFunction& f, const Exponents& exps) {
    if (!(exps.p > 1.0)) throw std::invalid_argument("g_norm_bound needs p > 1");
    const auto w = WindowFamily::dyadic(f.grid());
    GNormReport r;
    r.f_norm = lp_norm(f, exps.p);
    r.g_norm = lp_norm(g_function(f, exps, w), exps.p);
    r.m1_norm = lp_norm(partial_maximal_x(f, w), exps.p);
    r.m2_norm = lp_norm(partial_maximal_y(f, w), exps.p);
    if (r.f_norm > 0.0) {
        r.ratio = r.g_norm / (r.f_norm * r.f_norm);
        r.fubini_deviation = std::abs(r.g_norm - r.m1_norm * r.m2_norm) / r.g_norm;
    }
    return r;
}

}  // namespace hls
