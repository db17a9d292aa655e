// Discrete fractional convolution f * k on a ProductGrid.
//
// Kernel samples live on the grid's own cell centres, i.e. at offsets
// (k + 1/2) h per axis. Pairing a source cell centre with such an offset
// lands on a cell corner, so output sample i holds the convolution at the
// corner c_i + h/2 (every axis). Sources outside the box are zero; kernel
// offsets outside the box are dropped.
//
//   out[i] = sum_j f[j] k[i - j + N/2] h^(m+n)
#pragma once

#include "hls/grid.hpp"
#include "hls/kernel.hpp"

namespace hls {

/// Direct O(N^(2(m+n))) summation; the reference path.
[[nodiscard]] GridFunction convolve_direct(const GridFunction& f, const GridFunction& k);

/// Same contract as convolve_direct via a zero-padded real FFT of size 2N
/// per axis (no periodic wrap-around reaches the box).
[[nodiscard]] GridFunction convolve_fast(const GridFunction& f, const GridFunction& k);

/// max |a - b| / max |b|, the deviation measure used between the two paths.
[[nodiscard]] double relative_deviation(const GridFunction& a, const GridFunction& b);

/// The four pieces of (f * Omega)(point) for |u| <= r1 / > r1 and
/// |v| <= r2 / > r2 (first index: x-group, second: y-group).
struct RegionBounds {
    double t11 = 0.0;
    double t12 = 0.0;
    double t21 = 0.0;
    double t22 = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;

    [[nodiscard]] double total() const noexcept { return t11 + t12 + t21 + t22; }
};

/// Splits the convolution sum at `point` by offset radius. Kernel factors are
/// evaluated analytically per offset over the same offset set that
/// convolve_direct uses, so the four parts add up to convolve_direct at the
/// point. Each region is accumulated in row-major source order.
[[nodiscard]] RegionBounds region_split(const GridFunction& f, const Exponents& exps,
                                        const GridNode& point, double r1, double r2);

}  // namespace hls
