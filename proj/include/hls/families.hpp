// Test-function families used by the verification campaigns. Every member
// is sampled at dilated coordinates, f_{s,t}(x, y) = f(s x, t y).
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "hls/grid.hpp"

namespace hls {

enum class Family { zero, gaussian, box, tensor_box, spike, random };

[[nodiscard]] std::string_view family_name(Family f) noexcept;
[[nodiscard]] std::optional<Family> parse_family(std::string_view name) noexcept;

struct FamilySpec {
    Family kind = Family::gaussian;
    double width = 1.0;        // Gaussian sigma, box half-width, random support half-width
    std::uint64_t seed = 0;    // random family only
    int random_blocks = 8;     // random blocks per axis
};

/// Member (s, t) of a family. The spike is a single cell next to the origin
/// with unit mass times s^-m t^-n, the lattice image of a dilated point mass.
[[nodiscard]] GridFunction family_member(const ProductGrid& grid, const FamilySpec& spec, double s, double t);

}  // namespace hls
