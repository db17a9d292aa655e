#include "hls/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace hls {

namespace {

void require_same_grid(const GridFunction& f, const GridFunction& k) {
    if (!(f.grid() == k.grid())) throw std::invalid_argument("convolution operands live on different grids");
}

// Per-axis indices of every flat index, x-group axes first.
std::vector<std::array<int, 4>> axis_table(const ProductGrid& grid) {
    const int d = grid.rank();
    const int N = grid.points_per_axis();
    std::vector<std::array<int, 4>> table(grid.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        std::size_t rem = i;
        for (int a = d - 1; a >= 0; --a) {
            table[i][a] = static_cast<int>(rem % N);
            rem /= N;
        }
    }
    return table;
}

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const noexcept {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(p);
    }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

template <typename T>
std::unique_ptr<T[], FftwFree> fftw_buffer(std::size_t count) {
    auto* raw = static_cast<T*>(fftw_malloc(sizeof(T) * count));
    if (raw == nullptr) throw std::bad_alloc();
    return std::unique_ptr<T[], FftwFree>(raw);
}

}  // namespace

GridFunction convolve_direct(const GridFunction& f, const GridFunction& k) {
    require_same_grid(f, k);
    const ProductGrid& grid = f.grid();
    const int d = grid.rank();
    const int N = grid.points_per_axis();
    const int half = N / 2;
    const auto table = axis_table(grid);
    const auto fv = f.values();
    const auto kv = k.values();

    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& ia = table[i];
        double acc = 0.0;
        for (std::size_t j = 0; j < fv.size(); ++j) {
            if (fv[j] == 0.0) continue;
            const auto& ja = table[j];
            std::size_t kidx = 0;
            bool inside = true;
            for (int a = 0; a < d; ++a) {
                const int off = ia[a] - ja[a] + half;
                if (off < 0 || off >= N) {
                    inside = false;
                    break;
                }
                kidx = kidx * N + static_cast<std::size_t>(off);
            }
            if (inside) acc += fv[j] * kv[kidx];
        }
        out[i] = acc * grid.cell_volume();
    }
    return GridFunction(grid, std::move(out));
}

GridFunction convolve_fast(const GridFunction& f, const GridFunction& k) {
    require_same_grid(f, k);
    const ProductGrid& grid = f.grid();
    const int d = grid.rank();
    const int N = grid.points_per_axis();
    const int P = 2 * N;

    std::array<int, 4> dims{};
    std::size_t real_count = 1;
    for (int a = 0; a < d; ++a) {
        dims[a] = P;
        real_count *= static_cast<std::size_t>(P);
    }
    const std::size_t complex_count = real_count / P * (P / 2 + 1);

    auto fin = fftw_buffer<double>(real_count);
    auto kin = fftw_buffer<double>(real_count);
    auto fhat = fftw_buffer<fftw_complex>(complex_count);
    auto khat = fftw_buffer<fftw_complex>(complex_count);
    std::fill_n(fin.get(), real_count, 0.0);
    std::fill_n(kin.get(), real_count, 0.0);

    // Embed both arrays at the origin corner of the padded box.
    auto padded_index = [&](std::size_t flat) {
        std::size_t rem = flat;
        std::array<std::size_t, 4> idx{};
        for (int a = d - 1; a >= 0; --a) {
            idx[a] = rem % N;
            rem /= N;
        }
        std::size_t out = 0;
        for (int a = 0; a < d; ++a) out = out * P + idx[a];
        return out;
    };
    std::vector<std::size_t> embed(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) embed[i] = padded_index(i);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        fin[embed[i]] = f[i];
        kin[embed[i]] = k[i];
    }

    Plan forward_f, forward_k, backward;
    {
        std::lock_guard lock(planner_mutex());
        forward_f.reset(fftw_plan_dft_r2c(d, dims.data(), fin.get(), fhat.get(), FFTW_ESTIMATE));
        forward_k.reset(fftw_plan_dft_r2c(d, dims.data(), kin.get(), khat.get(), FFTW_ESTIMATE));
        backward.reset(fftw_plan_dft_c2r(d, dims.data(), fhat.get(), fin.get(), FFTW_ESTIMATE));
    }
    if (!forward_f || !forward_k || !backward) throw std::runtime_error("FFT planning failed");

    fftw_execute(forward_f.get());
    fftw_execute(forward_k.get());
    for (std::size_t i = 0; i < complex_count; ++i) {
        const double re = fhat[i][0] * khat[i][0] - fhat[i][1] * khat[i][1];
        const double im = fhat[i][0] * khat[i][1] + fhat[i][1] * khat[i][0];
        fhat[i][0] = re;
        fhat[i][1] = im;
    }
    fftw_execute(backward.get());

    // Full linear convolution index of output i is i + N/2 on every axis.
    const double scale = grid.cell_volume() / static_cast<double>(real_count);
    std::size_t shift = 0;
    for (int a = 0; a < d; ++a) shift = shift * P + static_cast<std::size_t>(N / 2);
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        out[i] = std::max(0.0, fin[embed[i] + shift] * scale);
    return GridFunction(grid, std::move(out));
}

double relative_deviation(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b);
    double diff = 0.0;
    double ref = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) {
        diff = std::max(diff, std::abs(a[i] - b[i]));
        ref = std::max(ref, std::abs(b[i]));
    }
    if (ref == 0.0) return diff;
    return diff / ref;
}

RegionBounds region_split(const GridFunction& f, const Exponents& exps, const GridNode& point,
                          double r1, double r2) {
    if (!(r1 > 0.0) || !(r2 > 0.0)) throw std::invalid_argument("splitting radii must be positive");
    const ProductGrid& grid = f.grid();
    if (exps.m != grid.m() || exps.n != grid.n())
        throw std::invalid_argument("exponent dimensions do not match the grid");
    if (!grid.contains(point)) throw std::out_of_range("split point outside the grid");

    const int N = grid.points_per_axis();
    const int half = N / 2;
    // Offset (k + 1/2) h with k in [-N/2, N/2) per axis, stored at kernel index k + N/2.
    const auto phi_x = radial_power_factor(grid, grid.m(), exps.alpha);
    const auto phi_y = radial_power_factor(grid, grid.n(), exps.beta);

    // Kernel index of the offset from source group index to the point, or -1.
    auto offset_index = [&](const AxisIndex& at, std::size_t source, int dim) -> long {
        std::size_t rem = source;
        std::array<int, 2> src{};
        for (int a = dim - 1; a >= 0; --a) {
            src[a] = static_cast<int>(rem % N);
            rem /= N;
        }
        long idx = 0;
        for (int a = 0; a < dim; ++a) {
            const int off = at[a] - src[a] + half;
            if (off < 0 || off >= N) return -1;
            idx = idx * N + off;
        }
        return idx;
    };

    std::vector<long> ky(grid.y_count());
    std::vector<char> y_inner(grid.y_count());
    for (std::size_t jy = 0; jy < grid.y_count(); ++jy) {
        ky[jy] = offset_index(point.y, jy, grid.n());
        if (ky[jy] >= 0) y_inner[jy] = grid.y_radius(static_cast<std::size_t>(ky[jy])) <= r2;
    }

    RegionBounds out;
    out.r1 = r1;
    out.r2 = r2;
    const auto fv = f.values();
    for (std::size_t jx = 0; jx < grid.x_count(); ++jx) {
        const long kx = offset_index(point.x, jx, grid.m());
        if (kx < 0) continue;
        const bool x_inner = grid.x_radius(static_cast<std::size_t>(kx)) <= r1;
        const double px = phi_x[static_cast<std::size_t>(kx)];
        for (std::size_t jy = 0; jy < grid.y_count(); ++jy) {
            if (ky[jy] < 0) continue;
            const double term = fv[grid.flat(jx, jy)] * (px * phi_y[static_cast<std::size_t>(ky[jy])]);
            if (x_inner)
                (y_inner[jy] ? out.t11 : out.t12) += term;
            else
                (y_inner[jy] ? out.t21 : out.t22) += term;
        }
    }
    const double vol = grid.cell_volume();
    out.t11 *= vol;
    out.t12 *= vol;
    out.t21 *= vol;
    out.t22 *= vol;
    return out;
}

}  // namespace hls
