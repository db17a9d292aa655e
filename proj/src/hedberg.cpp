#include "hls/hedberg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hls {

namespace {

constexpr double kIdentityTol = 1e-12;

bool close(double a, double b, double tol) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 || std::abs(a - b) <= tol * scale;
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
}

std::string describe(const Exponents& e) {
    std::ostringstream os;
    os.precision(17);
    os << "(m=" << e.m << ", n=" << e.n << ", alpha=" << e.alpha << ", beta=" << e.beta << ", p=" << e.p
       << ", q=" << e.q << ")";
    return os.str();
}

}  // namespace

Admissibility check_exponents(const Exponents& e, double tol) {
    Admissibility a;
    const double gap = 1.0 / e.p - 1.0 / e.q;
    a.derived_q = 1.0 / (1.0 / e.p - e.alpha / e.m);
    a.balanced = std::abs(gap - e.alpha / e.m) <= tol && std::abs(e.alpha / e.m - e.beta / e.n) <= tol;
    a.implied_identity = std::abs(1.0 / e.q - (1.0 / e.p - (e.alpha + e.beta) / (e.m + e.n))) <= tol;
    // (m - alpha) p' > m  <=>  m - alpha p > 0
    a.tail_x = e.m - e.alpha * e.p > 0.0;
    a.tail_y = e.n - e.beta * e.p > 0.0;
    if (!a.balanced) {
        if (std::abs(e.alpha / e.m - e.beta / e.n) > tol)
            a.first_violation = "alpha/m != beta/n for " + describe(e);
        else
            a.first_violation = "1/p - 1/q != alpha/m for " + describe(e);
    } else if (!a.implied_identity) {
        a.first_violation = "1/q != 1/p - (alpha+beta)/(m+n) for " + describe(e);
    } else if (!a.tail_x) {
        a.first_violation = "x tail not integrable: (m-alpha)p/(p-1) <= m for " + describe(e);
    } else if (!a.tail_y) {
        a.first_violation = "y tail not integrable: (n-beta)p/(p-1) <= n for " + describe(e);
    }
    return a;
}

double inner_ball_constant(int dim, double a) {
    if (!(a > 0.0 && a < dim)) throw std::invalid_argument("inner ball exponent must lie in (0, dim)");
    return unit_sphere_area(dim) / a;
}

double tail_integral_constant(int dim, double a, double p) {
    const double gamma = (dim - a) * p / (p - 1.0);
    if (!(gamma > dim)) throw std::invalid_argument("tail integral diverges: (dim - a) p/(p-1) <= dim");
    return unit_sphere_area(dim) / (gamma - dim);
}

RegionConstants region_constants(const Exponents& e) {
    const double pc = (e.p - 1.0) / e.p;
    const double in_x = inner_ball_constant(e.m, e.alpha);
    const double in_y = inner_ball_constant(e.n, e.beta);
    const double tail_x = std::pow(tail_integral_constant(e.m, e.alpha, e.p), pc);
    const double tail_y = std::pow(tail_integral_constant(e.n, e.beta, e.p), pc);
    return {in_x * in_y, in_x * tail_y, tail_x * in_y, tail_x * tail_y};
}

double bound_region11(double mf_at_point, double r1, double r2, const Exponents& e) {
    const double c = inner_ball_constant(e.m, e.alpha) * inner_ball_constant(e.n, e.beta);
    return c * mf_at_point * std::pow(r1, e.alpha) * std::pow(r2, e.beta);
}

double bound_region22(double f_norm, double r1, double r2, const Exponents& e) {
    const double pc = (e.p - 1.0) / e.p;
    const double c = std::pow(tail_integral_constant(e.m, e.alpha, e.p) * tail_integral_constant(e.n, e.beta, e.p), pc);
    return c * f_norm * std::pow(r1, e.alpha - e.m / e.p) * std::pow(r2, e.beta - e.n / e.p);
}

double bound_region12(double n1_at_x, double r1, double r2, const Exponents& e) {
    const double pc = (e.p - 1.0) / e.p;
    const double c = inner_ball_constant(e.m, e.alpha) * std::pow(tail_integral_constant(e.n, e.beta, e.p), pc);
    return c * n1_at_x * std::pow(r1, e.alpha) * std::pow(r2, e.beta - e.n / e.p);
}

double bound_region21(double n2_at_y, double r1, double r2, const Exponents& e) {
    const double pc = (e.p - 1.0) / e.p;
    const double c = std::pow(tail_integral_constant(e.m, e.alpha, e.p), pc) * inner_ball_constant(e.n, e.beta);
    return c * n2_at_y * std::pow(r1, e.alpha - e.m / e.p) * std::pow(r2, e.beta);
}

namespace {

// Solves r1^(-m/p) r2^(-n/p) = level and r1^(-m/p) / r2^(-n/p) = n1 / n2.
SplitRadii balance(double level, double n1, double n2, const Exponents& e) {
    const double x = std::sqrt(level * n1 / n2);  // r1^(-m/p)
    const double y = std::sqrt(level * n2 / n1);  // r2^(-n/p)
    return {std::pow(x, -e.p / e.m), std::pow(y, -e.p / e.n)};
}

}  // namespace

SplitRadii select_radii_case1(double m_value, double n1, double n2, double f_norm, const Exponents& e) {
    require_positive(m_value, "M f");
    require_positive(n1, "n1");
    require_positive(n2, "n2");
    require_positive(f_norm, "||f||_p");
    return balance(m_value / f_norm, n1, n2, e);
}

SplitRadii select_radii_case2(double g_value, double n1, double n2, double f_norm, const Exponents& e) {
    require_positive(g_value, "G f");
    require_positive(n1, "n1");
    require_positive(n2, "n2");
    require_positive(f_norm, "||f||_p");
    return balance(g_value / (f_norm * f_norm), n1, n2, e);
}

double LatticeSlack::s12(double p) const noexcept { return inner_x * std::pow(tail_y, (p - 1.0) / p); }
double LatticeSlack::s21(double p) const noexcept { return std::pow(tail_x, (p - 1.0) / p) * inner_y; }
double LatticeSlack::s22(double p) const noexcept { return std::pow(tail_x * tail_y, (p - 1.0) / p); }

namespace {

// Integer offsets k in [-N/2, N/2)^dim with the staggered radius |k + 1/2|
// (cell units) and the lattice norm |k| that decides window membership.
struct Offset {
    double staggered;
    double lattice;
};

std::vector<Offset> kernel_offsets(int dim, int N) {
    std::vector<Offset> out;
    const int half = N / 2;
    if (dim == 1) {
        for (int k = -half; k < half; ++k) out.push_back({std::abs(k + 0.5), std::abs(static_cast<double>(k))});
        return out;
    }
    for (int k1 = -half; k1 < half; ++k1)
        for (int k2 = -half; k2 < half; ++k2)
            out.push_back({std::hypot(k1 + 0.5, k2 + 0.5), std::hypot(static_cast<double>(k1), static_cast<double>(k2))});
    return out;
}

}  // namespace

double lattice_inner_slack(int dim, double a, int N) {
    const double c = inner_ball_constant(dim, a);
    // Shell j holds offsets with 2^(j-1) <= |k| < 2^j (j = 0: k = 0); the
    // enclosing window B_{2^j} has lattice_ball_count(dim, 2^j) cells.
    std::vector<double> shell_min;
    for (const auto& o : kernel_offsets(dim, N)) {
        int j = 0;
        while (!(o.lattice < std::ldexp(1.0, j) - 1e-9)) ++j;
        if (static_cast<std::size_t>(j) >= shell_min.size()) shell_min.resize(j + 1, INFINITY);
        shell_min[j] = std::min(shell_min[j], o.staggered);
    }
    std::vector<std::pair<double, double>> jumps;  // (radius, added weight)
    for (std::size_t j = 0; j < shell_min.size(); ++j) {
        if (!std::isfinite(shell_min[j])) continue;
        const double weight = radial_power(shell_min[j], dim, a) *
                              static_cast<double>(lattice_ball_count(dim, std::ldexp(1.0, static_cast<int>(j))));
        jumps.emplace_back(shell_min[j], weight);
    }
    std::sort(jumps.begin(), jumps.end());
    double d = 0.0;
    double sup = 0.0;
    for (const auto& [r, w] : jumps) {
        d += w;
        sup = std::max(sup, d / (c * std::pow(r, a)));
    }
    return sup;
}

double lattice_tail_slack(int dim, double a, double p, int N) {
    const double gamma = (dim - a) * p / (p - 1.0);
    const double T = tail_integral_constant(dim, a, p);
    auto offsets = kernel_offsets(dim, N);
    std::vector<double> radii;
    radii.reserve(offsets.size());
    for (const auto& o : offsets) radii.push_back(o.staggered);
    std::sort(radii.begin(), radii.end(), std::greater<>());
    // Sum over |u| >= r for r just at each radius, compared with the integral from r.
    double tail = 0.0;
    double sup = 0.0;
    std::size_t i = 0;
    while (i < radii.size()) {
        const double r = radii[i];
        while (i < radii.size() && radii[i] == r) tail += std::pow(radii[i++], -gamma);
        sup = std::max(sup, tail / (T * std::pow(r, dim - gamma)));
    }
    return sup;
}

LatticeSlack lattice_slack(const ProductGrid& grid, const Exponents& e) {
    const int N = grid.points_per_axis();
    return {lattice_inner_slack(e.m, e.alpha, N), lattice_inner_slack(e.n, e.beta, N),
            lattice_tail_slack(e.m, e.alpha, e.p, N), lattice_tail_slack(e.n, e.beta, e.p, N)};
}

double HedbergCertificate::ratio() const noexcept {
    if (final_bound == 0.0) return lhs == 0.0 ? 0.0 : INFINITY;
    return lhs / final_bound;
}

CertificationContext::CertificationContext(GridFunction f, const Exponents& exps)
    : f_(std::move(f)), exps_(exps), mf_(f_.grid()) {
    if (exps.m != f_.grid().m() || exps.n != f_.grid().n())
        throw std::invalid_argument("exponent dimensions do not match the grid");
    const auto adm = check_exponents(exps);
    if (!adm.ok()) throw std::invalid_argument(adm.first_violation);
    const auto w = WindowFamily::dyadic(f_.grid());
    mf_ = strong_maximal(f_, w);
    norms_ = mixed_slice_norms(f_, exps.p, w);
    f_norm_ = lp_norm(f_, exps.p);
    slack_ = lattice_slack(f_.grid(), exps);
}

HedbergCertificate CertificationContext::certify(const GridNode& point) const {
    const ProductGrid& grid = f_.grid();
    if (!grid.contains(point)) throw std::out_of_range("certification point outside the grid");
    const Exponents& e = exps_;
    HedbergCertificate c;
    c.point = point;
    c.slack = {slack_.s11(), slack_.s12(e.p), slack_.s21(e.p), slack_.s22(e.p)};
    if (f_norm_ == 0.0) return c;  // f == 0: every field is zero and 0 <= 0

    const std::size_t xi = grid.x_flat(point.x);
    const std::size_t yi = grid.y_flat(point.y);
    c.m_value = mf_.at(xi, yi);
    c.n1 = norms_.n1[xi];
    c.n2 = norms_.n2[yi];
    c.g_value = c.n1 * c.n2;
    c.f_norm = f_norm_;

    const double pq = e.p / e.q;
    c.case_id = c.g_value <= c.m_value * c.f_norm ? 1 : 2;
    // Region-11 driver: M f in case 1, G f / ||f|| in case 2.
    double driver = 0.0;
    SplitRadii radii;
    if (c.case_id == 1) {
        driver = c.m_value;
        radii = select_radii_case1(c.m_value, c.n1, c.n2, c.f_norm, e);
        c.final_bound = std::pow(c.m_value, pq) * std::pow(c.f_norm, 1.0 - pq);
    } else {
        driver = c.g_value / c.f_norm;
        radii = select_radii_case2(c.g_value, c.n1, c.n2, c.f_norm, e);
        c.final_bound = std::pow(c.g_value, pq) * std::pow(c.f_norm, 1.0 - 2.0 * pq);
    }
    c.r1 = radii.r1;
    c.r2 = radii.r2;

    c.regions = region_split(f_, e, point, c.r1, c.r2);
    c.lhs = c.regions.total();
    c.region_limits = {bound_region11(driver, c.r1, c.r2, e), bound_region12(c.n1, c.r1, c.r2, e),
                       bound_region21(c.n2, c.r1, c.r2, e), bound_region22(c.f_norm, c.r1, c.r2, e)};

    const std::array<double, 4> parts = {c.regions.t11, c.regions.t12, c.regions.t21, c.regions.t22};
    static constexpr std::array<const char*, 4> names = {"t11", "t12", "t21", "t22"};
    for (int i = 0; i < 4; ++i)
        if (parts[i] > c.region_limits[i] * c.slack[i] * (1.0 + kIdentityTol))
            c.violations.push_back(std::string(names[i]) + " exceeds its region bound");

    // Balanced radii: the inner/outer bounds meet at the final bound.
    const double r1a = std::pow(c.r1, e.alpha);
    const double r2b = std::pow(c.r2, e.beta);
    const double r1t = std::pow(c.r1, e.alpha - e.m / e.p);
    const double r2t = std::pow(c.r2, e.beta - e.n / e.p);
    const double near = driver * r1a * r2b;
    const double far = c.f_norm * r1t * r2t;
    c.balanced_value = near;
    if (!close(near, far, kIdentityTol)) c.violations.push_back("inner/outer balancing identity fails");
    if (!close(near, c.final_bound, kIdentityTol)) c.violations.push_back("exponent collapse to final bound fails");

    const double mixed_x = c.n1 * r1a * r2t;
    const double mixed_y = c.n2 * r1t * r2b;
    c.mixed_value = mixed_x;
    if (!close(mixed_x, mixed_y, kIdentityTol)) c.violations.push_back("mixed balancing identity fails");
    if (c.case_id == 1) {
        const double ratio = c.m_value / c.f_norm;
        const double collapse =
            std::pow(ratio, pq) * std::sqrt(c.g_value / (c.m_value * c.f_norm)) * c.f_norm;
        if (!close(mixed_x, collapse, kIdentityTol)) c.violations.push_back("case-1 mixed collapse fails");
        if (mixed_x > c.final_bound * (1.0 + kIdentityTol))
            c.violations.push_back("case-1 mixed bound exceeds final bound");
    } else if (!close(mixed_x, c.final_bound, kIdentityTol)) {
        c.violations.push_back("case-2 mixed collapse fails");
    }
    return c;
}

HedbergCertificate certify_point(const GridFunction& f, const Exponents& exps, const GridNode& point) {
    return CertificationContext(f, exps).certify(point);
}

double theoretical_domination_constant(const Exponents& e, const LatticeSlack& s) {
    const auto c = region_constants(e);
    return c.c11 * s.s11() + c.c12 * s.s12(e.p) + c.c21 * s.s21(e.p) + c.c22 * s.s22(e.p);
}

}  // namespace hls
