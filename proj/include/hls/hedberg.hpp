// Pointwise Hedberg-type bound for the product fractional integral.
//
// At a grid point the convolution sum is split by offset radius into four
// regions (inner/outer in each coordinate group). Each region is bounded by
// an explicit power of the splitting radii times one of Mf, ||f||_p,
// ||M1 f(x,.)||_p or ||M2 f(.,y)||_p. The radii are then chosen in closed
// form to balance those bounds, which collapses everything to
//
//   case 1 (G f <= M f ||f||_p):  (M f)^(p/q) ||f||_p^(1 - p/q)
//   case 2 (G f >  M f ||f||_p):  (G f)^(p/q) ||f||_p^(1 - 2p/q)
//
// A HedbergCertificate records every quantity of that chain together with
// the lattice constants that make each inequality hold exactly on the grid.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "hls/convolution.hpp"
#include "hls/grid.hpp"
#include "hls/kernel.hpp"
#include "hls/maximal.hpp"

namespace hls {

struct Admissibility {
    bool balanced = false;          // 1/p - 1/q = alpha/m = beta/n
    bool implied_identity = false;  // 1/q = 1/p - (alpha + beta)/(m + n)
    bool tail_x = false;            // (m - alpha) p/(p-1) > m
    bool tail_y = false;            // (n - beta) p/(p-1) > n
    double derived_q = 0.0;         // from 1/q = 1/p - alpha/m
    std::string first_violation;    // empty when admissible

    [[nodiscard]] bool ok() const noexcept { return first_violation.empty(); }
};

[[nodiscard]] Admissibility check_exponents(const Exponents& exps, double tol = 1e-12);

/// int_{|u| <= 1} |u|^(a - dim) du = |S^(dim-1)| / a.
[[nodiscard]] double inner_ball_constant(int dim, double a);
/// int_{|u| > 1} |u|^((a - dim) p') du; throws unless (dim - a) p' > dim.
[[nodiscard]] double tail_integral_constant(int dim, double a, double p);

/// Constants of the four region bounds.
struct RegionConstants {
    double c11 = 0.0;
    double c12 = 0.0;
    double c21 = 0.0;
    double c22 = 0.0;
};

[[nodiscard]] RegionConstants region_constants(const Exponents& exps);

[[nodiscard]] double bound_region11(double mf_at_point, double r1, double r2, const Exponents& exps);
[[nodiscard]] double bound_region22(double f_norm, double r1, double r2, const Exponents& exps);
[[nodiscard]] double bound_region12(double n1_at_x, double r1, double r2, const Exponents& exps);
[[nodiscard]] double bound_region21(double n2_at_y, double r1, double r2, const Exponents& exps);

struct SplitRadii {
    double r1 = 0.0;
    double r2 = 0.0;
};

/// Radii balancing M f r1^a r2^b = ||f|| r1^(a-m/p) r2^(b-n/p) and the two
/// mixed bounds. Throws on nonpositive input.
[[nodiscard]] SplitRadii select_radii_case1(double m_value, double n1, double n2, double f_norm,
                                            const Exponents& exps);
/// As case 1 with M f replaced by G f / ||f||.
[[nodiscard]] SplitRadii select_radii_case2(double g_value, double n1, double n2, double f_norm,
                                            const Exponents& exps);

/// Lattice constants that turn the continuous region estimates into exact
/// inequalities on the staggered grid.
///
/// inner: sup_r D(r) / (c r^a), where D(r) bounds sum_{|u| <= r} f(x-u)|u|^(a-dim) h^dim
///        by Mf D(r) through the dyadic window shells of the maximal operator.
/// tail:  sup_r sum_{|u| > r} |u|^((a-dim)p') h^dim / int_{|u| > r} |u|^((a-dim)p') du.
struct LatticeSlack {
    double inner_x = 1.0;
    double inner_y = 1.0;
    double tail_x = 1.0;
    double tail_y = 1.0;

    [[nodiscard]] double s11() const noexcept { return inner_x * inner_y; }
    [[nodiscard]] double s12(double p) const noexcept;
    [[nodiscard]] double s21(double p) const noexcept;
    [[nodiscard]] double s22(double p) const noexcept;
};

[[nodiscard]] double lattice_inner_slack(int dim, double a, int points_per_axis);
[[nodiscard]] double lattice_tail_slack(int dim, double a, double p, int points_per_axis);
[[nodiscard]] LatticeSlack lattice_slack(const ProductGrid& grid, const Exponents& exps);

struct HedbergCertificate {
    GridNode point{};
    int case_id = 1;
    double r1 = 0.0;
    double r2 = 0.0;
    RegionBounds regions{};
    std::array<double, 4> region_limits{};  // analytic bounds for t11, t12, t21, t22
    std::array<double, 4> slack{};          // lattice factors applied to each bound
    double m_value = 0.0;
    double g_value = 0.0;
    double n1 = 0.0;
    double n2 = 0.0;
    double f_norm = 0.0;
    double balanced_value = 0.0;  // common value of the balanced inner/outer bounds
    double mixed_value = 0.0;     // common value of the balanced mixed bounds
    double final_bound = 0.0;
    double lhs = 0.0;
    std::vector<std::string> violations;

    [[nodiscard]] bool valid() const noexcept { return violations.empty(); }
    /// lhs / final_bound; 0 when both vanish.
    [[nodiscard]] double ratio() const noexcept;
};

/// Shared, read-only precomputation for certifying many points of one f.
class CertificationContext {
public:
    CertificationContext(GridFunction f, const Exponents& exps);

    [[nodiscard]] const GridFunction& function() const noexcept { return f_; }
    [[nodiscard]] const Exponents& exponents() const noexcept { return exps_; }
    [[nodiscard]] const GridFunction& strong_maximal_values() const noexcept { return mf_; }
    [[nodiscard]] const MixedSliceNorms& slice_norms() const noexcept { return norms_; }
    [[nodiscard]] double f_norm() const noexcept { return f_norm_; }
    [[nodiscard]] const LatticeSlack& slack() const noexcept { return slack_; }

    [[nodiscard]] HedbergCertificate certify(const GridNode& point) const;

private:
    GridFunction f_;
    Exponents exps_;
    GridFunction mf_;
    MixedSliceNorms norms_;
    double f_norm_ = 0.0;
    LatticeSlack slack_;
};

/// Throws std::invalid_argument naming the first violated condition when the
/// exponents are not admissible.
[[nodiscard]] HedbergCertificate certify_point(const GridFunction& f, const Exponents& exps,
                                               const GridNode& point);

/// Rigorous suite-independent constant C with lhs <= C final_bound, assembled
/// from the region constants and lattice slacks.
[[nodiscard]] double theoretical_domination_constant(const Exponents& exps, const LatticeSlack& slack);

}  // namespace hls
