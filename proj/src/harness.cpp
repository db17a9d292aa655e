#include "hls/harness.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <memory>
#include <mutex>
#include <thread>

#include "hls/convolution.hpp"
#include "hls/maximal.hpp"

namespace hls {

using nlohmann::json;

// ---------------------------------------------------------------- config

Exponents ExponentSpec::resolve(int m, int n) const {
    try {
        if (q) return Exponents::make(m, n, alpha, beta, p, *q);
        return Exponents::with_derived_q(m, n, alpha, beta, p);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad exponent set: ") + e.what());
    }
}

namespace {

std::vector<std::pair<double, double>> diagonal_ladder(std::initializer_list<double> xs) {
    std::vector<std::pair<double, double>> out;
    for (double x : xs) out.emplace_back(x, x);
    return out;
}

// 11 points per decade, 10^(-1/2) .. 10^(1/2), along one axis with the other fixed at 1.
std::vector<std::pair<double, double>> necessity_ladder() {
    std::vector<std::pair<double, double>> out;
    for (int k = -5; k <= 5; ++k) out.emplace_back(std::pow(10.0, k / 10.0), 1.0);
    for (int k = -5; k <= 5; ++k)
        if (k != 0) out.emplace_back(1.0, std::pow(10.0, k / 10.0));
    return out;
}

const std::vector<Family> kSuiteFamilies = {Family::gaussian, Family::box, Family::tensor_box, Family::spike,
                                            Family::random};

std::string_view sampling_name(KernelSampling s) {
    return s == KernelSampling::cell_average ? "cell_average" : "cell_centre";
}

template <typename T>
T get_as(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

void validate(const ExperimentConfig& c) {
    if (c.m < 1 || c.m > 2 || c.n < 1 || c.n > 2) throw ConfigError("m and n must be 1 or 2");
    if (c.points_per_axis < 2 || c.points_per_axis % 2 != 0)
        throw ConfigError("points_per_axis must be even and >= 2");
    if (c.m + c.n > 2 && c.points_per_axis > 48)
        throw ConfigError("points_per_axis is capped at 48 when m or n is 2");
    if (!(c.half_width > 0.0) || !std::isfinite(c.half_width)) throw ConfigError("half_width must be positive");
    if (!(c.base_width > 0.0) || !std::isfinite(c.base_width)) throw ConfigError("base_width must be positive");
    if (c.random_blocks < 1) throw ConfigError("random_blocks must be >= 1");
    if (c.point_stride < 1 || c.certificate_stride < 1) throw ConfigError("strides must be >= 1");
    if (c.parallel < 1) throw ConfigError("parallel must be >= 1");
    if (c.exponents.empty()) throw ConfigError("at least one exponent set is required");
    if (c.families.empty()) throw ConfigError("at least one family is required");
    if (c.dilations.empty()) throw ConfigError("dilation ladder is empty");
    for (const auto& [s, t] : c.dilations)
        if (!(s > 0.0) || !(t > 0.0) || !std::isfinite(s) || !std::isfinite(t))
            throw ConfigError("dilation factors must be positive and finite");
    for (const auto& e : c.exponents) (void)e.resolve(c.m, c.n);
}

std::vector<Exponents> resolved(const ExperimentConfig& cfg) {
    std::vector<Exponents> out;
    for (const auto& e : cfg.exponents) out.push_back(e.resolve(cfg.m, cfg.n));
    return out;
}

void require_admissible(const std::vector<Exponents>& exps) {
    for (const auto& e : exps) {
        const auto adm = check_exponents(e);
        if (!adm.ok()) throw ConfigError("inadmissible exponents: " + adm.first_violation);
    }
}

std::string shortest(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) return "nan";
    return std::string(buf, end);
}

json node_json(const GridNode& n, const ProductGrid& g) {
    json x = json::array(), y = json::array();
    for (int k = 0; k < g.m(); ++k) x.push_back(n.x[k]);
    for (int k = 0; k < g.n(); ++k) y.push_back(n.y[k]);
    return {{"x", x}, {"y", y}};
}

template <typename Key>
std::vector<FamilyStability> stability_of(const std::vector<Key>& keys, const std::vector<double>& values) {
    // keys are (family, exponent index); first-seen order is kept
    std::vector<FamilyStability> out;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        auto it = std::find_if(out.begin(), out.end(), [&](const FamilyStability& s) {
            return s.family == keys[i].first && s.exponent_index == keys[i].second;
        });
        if (it == out.end()) {
            out.push_back({keys[i].first, keys[i].second, values[i], values[i]});
        } else {
            it->min_value = std::min(it->min_value, values[i]);
            it->max_value = std::max(it->max_value, values[i]);
        }
    }
    return out;
}

bool all_stable(const std::vector<FamilyStability>& st, double factor) {
    return std::all_of(st.begin(), st.end(), [&](const FamilyStability& s) { return s.spread() < factor; });
}

json stability_json(const std::vector<FamilyStability>& st) {
    json a = json::array();
    for (const auto& s : st)
        a.push_back({{"family", family_name(s.family)},
                     {"exponent_index", s.exponent_index},
                     {"min", s.min_value},
                     {"max", s.max_value},
                     {"spread", s.spread()}});
    return a;
}

}  // namespace

ExperimentConfig default_config(std::string_view subcommand) {
    ExperimentConfig c;
    c.exponents = {ExponentSpec{0.5, 0.5, 4.0 / 3.0, 4.0}};
    c.families = kSuiteFamilies;
    c.dilations = diagonal_ladder({0.25, 0.5, 1.0, 2.0, 4.0});
    if (subcommand == "pointwise") {
        c.tolerances.suite_constant = 10.0;
    } else if (subcommand == "normcheck") {
        c.kernel_sampling = KernelSampling::cell_average;
        c.tolerances.norm_constant = 10.0;
    } else if (subcommand == "necessity") {
        c.points_per_axis = 1024;
        c.half_width = 128.0;
        c.families = {Family::gaussian};
        c.exponents = {ExponentSpec{0.5, 0.5, 4.0 / 3.0, 4.0}, ExponentSpec{0.7, 0.5, 4.0 / 3.0, 4.0}};
        c.dilations = necessity_ladder();
        c.kernel_sampling = KernelSampling::cell_average;
    } else if (subcommand == "bench-maximal") {
        c.points_per_axis = 48;
        c.families = {Family::random};
    } else {
        throw ConfigError("unknown subcommand '" + std::string(subcommand) + "'");
    }
    return c;
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig c) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::vector<std::string> known = {"grid",  "exponents",  "families",    "base_width",
                                                   "random_blocks", "dilations", "seed", "point_stride", "certificate_stride",
                                                   "kernel_sampling", "tolerances", "parallel"};
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("unknown config key '" + key + "'");

    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        if (!g.is_object()) throw ConfigError("'grid' must be an object");
        if (g.contains("m")) c.m = get_as<int>(g, "m");
        if (g.contains("n")) c.n = get_as<int>(g, "n");
        if (g.contains("half_width")) c.half_width = get_as<double>(g, "half_width");
        if (g.contains("points_per_axis")) c.points_per_axis = get_as<int>(g, "points_per_axis");
    }
    if (j.contains("exponents")) {
        const auto& a = j.at("exponents");
        if (!a.is_array()) throw ConfigError("'exponents' must be an array");
        c.exponents.clear();
        for (const auto& e : a) {
            if (!e.is_object()) throw ConfigError("exponent set must be an object");
            ExponentSpec s;
            s.alpha = get_as<double>(e, "alpha");
            s.beta = get_as<double>(e, "beta");
            s.p = get_as<double>(e, "p");
            if (e.contains("q") && !e.at("q").is_null()) s.q = get_as<double>(e, "q");
            c.exponents.push_back(s);
        }
    }
    if (j.contains("families")) {
        const auto& a = j.at("families");
        if (!a.is_array()) throw ConfigError("'families' must be an array");
        c.families.clear();
        for (const auto& f : a) {
            if (!f.is_string()) throw ConfigError("family names must be strings");
            const auto kind = parse_family(f.get<std::string>());
            if (!kind) throw ConfigError("unknown family '" + f.get<std::string>() + "'");
            c.families.push_back(*kind);
        }
    }
    if (j.contains("base_width")) c.base_width = get_as<double>(j, "base_width");
    if (j.contains("random_blocks")) c.random_blocks = get_as<int>(j, "random_blocks");
    if (j.contains("dilations")) {
        const auto& a = j.at("dilations");
        if (!a.is_array()) throw ConfigError("'dilations' must be an array of [s, t] pairs");
        c.dilations.clear();
        for (const auto& d : a) {
            if (!d.is_array() || d.size() != 2 || !d[0].is_number() || !d[1].is_number())
                throw ConfigError("each dilation must be a pair [s, t]");
            c.dilations.emplace_back(d[0].get<double>(), d[1].get<double>());
        }
    }
    if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j, "seed");
    if (j.contains("point_stride")) c.point_stride = get_as<int>(j, "point_stride");
    if (j.contains("certificate_stride")) c.certificate_stride = get_as<int>(j, "certificate_stride");
    if (j.contains("kernel_sampling")) {
        const auto s = get_as<std::string>(j, "kernel_sampling");
        if (s == "cell_centre") c.kernel_sampling = KernelSampling::cell_centre;
        else if (s == "cell_average") c.kernel_sampling = KernelSampling::cell_average;
        else throw ConfigError("kernel_sampling must be cell_centre or cell_average");
    }
    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        if (!t.is_object()) throw ConfigError("'tolerances' must be an object");
        if (t.contains("suite_constant")) c.tolerances.suite_constant = get_as<double>(t, "suite_constant");
        if (t.contains("norm_constant")) c.tolerances.norm_constant = get_as<double>(t, "norm_constant");
        if (t.contains("stability_factor")) c.tolerances.stability_factor = get_as<double>(t, "stability_factor");
        if (t.contains("slope_tolerance")) c.tolerances.slope_tolerance = get_as<double>(t, "slope_tolerance");
    }
    if (j.contains("parallel")) c.parallel = get_as<int>(j, "parallel");
    validate(c);
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json exps = json::array();
    for (const auto& e : c.exponents) {
        json o = {{"alpha", e.alpha}, {"beta", e.beta}, {"p", e.p}};
        o["q"] = e.q ? json(*e.q) : json(nullptr);
        exps.push_back(o);
    }
    json fams = json::array();
    for (Family f : c.families) fams.push_back(family_name(f));
    json dil = json::array();
    for (const auto& [s, t] : c.dilations) dil.push_back({s, t});
    // `parallel` is left out: it must not change the hash or the outputs.
    return {{"grid", {{"m", c.m}, {"n", c.n}, {"half_width", c.half_width}, {"points_per_axis", c.points_per_axis}}},
            {"exponents", exps},
            {"families", fams},
            {"base_width", c.base_width},
            {"random_blocks", c.random_blocks},
            {"dilations", dil},
            {"seed", c.seed},
            {"point_stride", c.point_stride},
            {"certificate_stride", c.certificate_stride},
            {"kernel_sampling", sampling_name(c.kernel_sampling)},
            {"tolerances",
             {{"suite_constant", c.tolerances.suite_constant},
              {"norm_constant", c.tolerances.norm_constant},
              {"stability_factor", c.tolerances.stability_factor},
              {"slope_tolerance", c.tolerances.slope_tolerance}}}};
}

std::string config_hash(const ExperimentConfig& cfg) {
    // nlohmann objects are key-sorted, so dump() is canonical
    const std::string text = config_to_json(cfg).dump();
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    const std::size_t k = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
    if (k <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < k; ++w)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                    }
                }
            });
    }
    if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------- pointwise

bool PointwiseReport::no_violations() const noexcept {
    return std::all_of(members.begin(), members.end(), [](const MemberResult& m) { return m.violations.empty(); });
}

bool PointwiseReport::stable() const noexcept { return all_stable(stability, stability_factor); }

std::vector<GridNode> campaign_points(const ProductGrid& grid, int stride) {
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");
    std::vector<GridNode> out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const GridNode node = grid.node(i);
        bool keep = true;
        for (int k = 0; k < grid.m(); ++k) keep = keep && node.x[k] % stride == 0;
        for (int k = 0; k < grid.n(); ++k) keep = keep && node.y[k] % stride == 0;
        if (keep) out.push_back(node);
    }
    return out;
}

PointwiseReport run_pointwise_campaign(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto exps = resolved(cfg);
    require_admissible(exps);
    const ProductGrid grid = cfg.grid();
    const auto points = campaign_points(grid, cfg.point_stride);

    PointwiseReport r;
    r.suite_constant = cfg.tolerances.suite_constant;
    r.stability_factor = cfg.tolerances.stability_factor;
    for (const auto& e : exps) {
        r.slacks.push_back(lattice_slack(grid, e));
        r.theoretical_constants.push_back(theoretical_domination_constant(e, r.slacks.back()));
    }

    for (std::size_t ei = 0; ei < exps.size(); ++ei)
        for (Family fam : cfg.families)
            for (const auto& [s, t] : cfg.dilations) {
                MemberResult mem;
                mem.family = fam;
                mem.exponent_index = ei;
                mem.s = s;
                mem.t = t;
                r.members.push_back(std::move(mem));
            }

    const auto emitted = [&](const GridNode& node) {
        bool keep = true;
        for (int k = 0; k < grid.m(); ++k) keep = keep && node.x[k] % cfg.certificate_stride == 0;
        for (int k = 0; k < grid.n(); ++k) keep = keep && node.y[k] % cfg.certificate_stride == 0;
        return keep;
    };
    parallel_for(r.members.size(), cfg.parallel, [&](std::size_t i) {
        auto& mem = r.members[i];
        const CertificationContext ctx(family_member(grid, cfg.family_spec(mem.family), mem.s, mem.t),
                                       exps[mem.exponent_index]);
        mem.points = points.size();
        for (std::size_t k = 0; k < points.size(); ++k) {
            auto c = ctx.certify(points[k]);
            (c.case_id == 1 ? mem.case1 : mem.case2) += 1;
            const double ratio = c.ratio();
            if (k == 0 || ratio > mem.max_ratio) {
                mem.max_ratio = ratio;
                mem.argmax = c.point;
                mem.worst = c;
            }
            for (const auto& v : c.violations) mem.violations.push_back(v);
            if (!c.valid() || emitted(c.point)) mem.certificates.push_back(std::move(c));
        }
    });

    std::vector<std::pair<Family, std::size_t>> keys;
    std::vector<double> values;
    for (const auto& mem : r.members) {
        r.max_ratio = std::max(r.max_ratio, mem.max_ratio);
        keys.emplace_back(mem.family, mem.exponent_index);
        values.push_back(mem.max_ratio);
    }
    r.stability = stability_of(keys, values);
    return r;
}

// ---------------------------------------------------------------- normcheck

namespace {

GridFunction kernel_for(const ProductGrid& grid, const Exponents& e, KernelSampling s) {
    return s == KernelSampling::cell_average ? riesz_kernel_cell_average(grid, e) : riesz_kernel(grid, e);
}

SlopeRecord measure(const GridFunction& f, const GridFunction& kernel, const Exponents& e) {
    SlopeRecord rec;
    rec.norm_p = lp_norm(f, e.p);
    if (rec.norm_p == 0.0) return rec;
    rec.norm_q = lp_norm(convolve_fast(f, kernel), e.q);
    rec.ratio = rec.norm_q / rec.norm_p;
    return rec;
}

}  // namespace

NormRecord norm_ratio(const GridFunction& f, const Exponents& exps, KernelSampling sampling) {
    const auto rec = measure(f, kernel_for(f.grid(), exps, sampling), exps);
    NormRecord out;
    out.norm_q = rec.norm_q;
    out.norm_p = rec.norm_p;
    out.ratio = rec.ratio;
    return out;
}

bool NormReport::stable() const noexcept { return all_stable(stability, stability_factor); }

NormReport run_norm_check(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto exps = resolved(cfg);
    require_admissible(exps);
    const ProductGrid grid = cfg.grid();

    std::vector<GridFunction> kernels;
    for (const auto& e : exps) kernels.push_back(kernel_for(grid, e, cfg.kernel_sampling));

    NormReport r;
    r.norm_constant = cfg.tolerances.norm_constant;
    r.stability_factor = cfg.tolerances.stability_factor;
    for (std::size_t ei = 0; ei < exps.size(); ++ei)
        for (Family fam : cfg.families)
            for (const auto& [s, t] : cfg.dilations) r.records.push_back({fam, ei, s, t});

    parallel_for(r.records.size(), cfg.parallel, [&](std::size_t i) {
        auto& rec = r.records[i];
        const auto f = family_member(grid, cfg.family_spec(rec.family), rec.s, rec.t);
        const auto m = measure(f, kernels[rec.exponent_index], exps[rec.exponent_index]);
        rec.norm_q = m.norm_q;
        rec.norm_p = m.norm_p;
        rec.ratio = m.ratio;
    });

    std::vector<std::pair<Family, std::size_t>> keys;
    std::vector<double> values;
    for (const auto& rec : r.records) {
        r.max_ratio = std::max(r.max_ratio, rec.ratio);
        keys.emplace_back(rec.family, rec.exponent_index);
        values.push_back(rec.ratio);
    }
    r.stability = stability_of(keys, values);
    return r;
}

// ---------------------------------------------------------------- necessity

bool SlopeReport::pass_s() const noexcept { return std::abs(slope_s - theoretical_s) <= tolerance; }
bool SlopeReport::pass_t() const noexcept { return std::abs(slope_t - theoretical_t) <= tolerance; }

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("slope fit needs >= 2 paired points");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx == 0.0) throw std::invalid_argument("slope fit needs distinct abscissae");
    return sxy / sxx;
}

std::vector<SlopeReport> run_necessity_sweep(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto exps = resolved(cfg);
    const ProductGrid grid = cfg.grid();
    const Family fam = cfg.families.front();

    std::vector<double> s_ladder, t_ladder;
    for (const auto& [s, t] : cfg.dilations) {
        if (t == 1.0) s_ladder.push_back(s);
        if (s == 1.0) t_ladder.push_back(t);
    }
    auto span_ok = [](const std::vector<double>& v) {
        if (v.size() < 2) return false;
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return *hi / *lo >= 10.0 * (1.0 - 1e-12);
    };
    if (!span_ok(s_ladder)) throw ConfigError("s-ladder (t = 1) must span at least one decade");
    if (!span_ok(t_ladder)) throw ConfigError("t-ladder (s = 1) must span at least one decade");

    std::vector<SlopeReport> out;
    for (const auto& e : exps) {
        const auto kernel = kernel_for(grid, e, cfg.kernel_sampling);
        SlopeReport rep;
        rep.exponents = e;
        rep.family = fam;
        rep.tolerance = cfg.tolerances.slope_tolerance;
        const double gap = 1.0 / e.p - 1.0 / e.q;
        rep.theoretical_s = e.m * gap - e.alpha;
        rep.theoretical_t = e.n * gap - e.beta;

        std::vector<std::pair<double, double>> jobs;
        for (double s : s_ladder) jobs.emplace_back(s, 1.0);
        for (double t : t_ladder) jobs.emplace_back(1.0, t);
        std::vector<SlopeRecord> recs(jobs.size());
        parallel_for(jobs.size(), cfg.parallel, [&](std::size_t i) {
            const auto [s, t] = jobs[i];
            recs[i] = measure(family_member(grid, cfg.family_spec(fam), s, t), kernel, e);
            recs[i].s = s;
            recs[i].t = t;
        });
        rep.s_sweep.assign(recs.begin(), recs.begin() + static_cast<long>(s_ladder.size()));
        rep.t_sweep.assign(recs.begin() + static_cast<long>(s_ladder.size()), recs.end());

        auto fit = [](const std::vector<SlopeRecord>& sweep, bool by_s) {
            std::vector<double> xs, ys;
            for (const auto& r : sweep) {
                if (!(r.ratio > 0.0)) throw std::runtime_error("necessity sweep met a zero member");
                xs.push_back(std::log(by_s ? r.s : r.t));
                ys.push_back(std::log(r.ratio));
            }
            return fit_slope(xs, ys);
        };
        rep.slope_s = fit(rep.s_sweep, true);
        rep.slope_t = fit(rep.t_sweep, false);
        out.push_back(std::move(rep));
    }
    return out;
}

// ---------------------------------------------------------------- benchmark

BenchReport run_bench_maximal(const ExperimentConfig& cfg) {
    validate(cfg);
    const ProductGrid grid = cfg.grid();
    const auto& [s, t] = cfg.dilations.front();
    const auto f = family_member(grid, cfg.family_spec(cfg.families.front()), s, t);
    const auto w = WindowFamily::dyadic(grid);

    using clock = std::chrono::steady_clock;
    BenchReport r;
    r.points_per_axis = grid.points_per_axis();
    const auto t0 = clock::now();
    const auto naive = strong_maximal_naive(f, w);
    const auto t1 = clock::now();
    const auto fast = strong_maximal(f, w);
    const auto t2 = clock::now();
    r.naive_seconds = std::chrono::duration<double>(t1 - t0).count();
    r.fast_seconds = std::chrono::duration<double>(t2 - t1).count();
    r.max_deviation = relative_deviation(fast, naive);
    return r;
}

// ---------------------------------------------------------------- reports

json certificate_to_json(const HedbergCertificate& c, const ProductGrid& grid) {
    return {{"point", node_json(c.point, grid)},
            {"case", c.case_id},
            {"r1", c.r1},
            {"r2", c.r2},
            {"regions", {c.regions.t11, c.regions.t12, c.regions.t21, c.regions.t22}},
            {"region_limits", c.region_limits},
            {"slack", c.slack},
            {"m_value", c.m_value},
            {"g_value", c.g_value},
            {"n1", c.n1},
            {"n2", c.n2},
            {"f_norm", c.f_norm},
            {"balanced_value", c.balanced_value},
            {"mixed_value", c.mixed_value},
            {"final_bound", c.final_bound},
            {"lhs", c.lhs},
            {"ratio", c.ratio()},
            {"valid", c.valid()},
            {"violations", c.violations}};
}

json report_header(const ExperimentConfig& cfg, std::string_view subcommand) {
    return {{"tool", "hls"},
            {"version", kLibraryVersion},
            {"schema", kReportSchemaVersion},
            {"subcommand", subcommand},
            {"config_hash", config_hash(cfg)},
            {"seed", cfg.seed},
            {"config", config_to_json(cfg)}};
}

json summary_json(const ExperimentConfig& cfg, const PointwiseReport& r) {
    json j = report_header(cfg, "pointwise");
    json members = json::array();
    for (const auto& m : r.members)
        members.push_back({{"family", family_name(m.family)},
                           {"exponent_index", m.exponent_index},
                           {"s", m.s},
                           {"t", m.t},
                           {"max_ratio", m.max_ratio},
                           {"argmax", node_json(m.argmax, cfg.grid())},
                           {"points", m.points},
                           {"case1", m.case1},
                           {"case2", m.case2},
                           {"violations", m.violations.size()}});
    json slacks = json::array();
    for (std::size_t i = 0; i < r.slacks.size(); ++i) {
        const auto& s = r.slacks[i];
        slacks.push_back({{"inner_x", s.inner_x},
                          {"inner_y", s.inner_y},
                          {"tail_x", s.tail_x},
                          {"tail_y", s.tail_y},
                          {"theoretical_constant", r.theoretical_constants[i]}});
    }
    j["members"] = members;
    j["stability"] = stability_json(r.stability);
    j["lattice"] = slacks;
    j["max_ratio"] = r.max_ratio;
    j["suite_constant"] = r.suite_constant;
    j["stability_factor"] = r.stability_factor;
    j["checks"] = {{"no_violations", r.no_violations()}, {"within_constant", r.within_constant()},
                   {"stable", r.stable()}};
    j["pass"] = r.pass();
    return j;
}

json summary_json(const ExperimentConfig& cfg, const NormReport& r) {
    json j = report_header(cfg, "normcheck");
    json recs = json::array();
    for (const auto& x : r.records)
        recs.push_back({{"family", family_name(x.family)},
                        {"exponent_index", x.exponent_index},
                        {"s", x.s},
                        {"t", x.t},
                        {"norm_q", x.norm_q},
                        {"norm_p", x.norm_p},
                        {"ratio", x.ratio}});
    j["records"] = recs;
    j["stability"] = stability_json(r.stability);
    j["max_ratio"] = r.max_ratio;
    j["norm_constant"] = r.norm_constant;
    j["stability_factor"] = r.stability_factor;
    j["checks"] = {{"bounded", r.bounded()}, {"stable", r.stable()}};
    j["pass"] = r.pass();
    return j;
}

json summary_json(const ExperimentConfig& cfg, const std::vector<SlopeReport>& reps) {
    json j = report_header(cfg, "necessity");
    json a = json::array();
    bool pass = true;
    for (const auto& r : reps) {
        const auto& e = r.exponents;
        a.push_back({{"exponents", {{"m", e.m}, {"n", e.n}, {"alpha", e.alpha}, {"beta", e.beta}, {"p", e.p}, {"q", e.q}}},
                     {"balanced", e.balanced()},
                     {"family", family_name(r.family)},
                     {"slope_s", r.slope_s},
                     {"slope_t", r.slope_t},
                     {"theoretical_s", r.theoretical_s},
                     {"theoretical_t", r.theoretical_t},
                     {"tolerance", r.tolerance},
                     {"pass_s", r.pass_s()},
                     {"pass_t", r.pass_t()}});
        pass = pass && r.pass();
    }
    j["sweeps"] = a;
    j["pass"] = pass;
    return j;
}

json summary_json(const ExperimentConfig& cfg, const BenchReport& r) {
    json j = report_header(cfg, "bench-maximal");
    j["points_per_axis"] = r.points_per_axis;
    j["naive_seconds"] = r.naive_seconds;
    j["fast_seconds"] = r.fast_seconds;
    j["speedup"] = r.fast_seconds > 0.0 ? r.naive_seconds / r.fast_seconds : 0.0;
    j["max_deviation"] = r.max_deviation;
    j["pass"] = r.max_deviation <= 1e-12;
    return j;
}

json certificates_json(const ExperimentConfig& cfg, const PointwiseReport& r) {
    json j = report_header(cfg, "pointwise");
    const ProductGrid grid = cfg.grid();
    json members = json::array();
    for (const auto& m : r.members) {
        json certs = json::array();
        for (const auto& c : m.certificates) certs.push_back(certificate_to_json(c, grid));
        members.push_back({{"family", family_name(m.family)},
                           {"exponent_index", m.exponent_index},
                           {"s", m.s},
                           {"t", m.t},
                           {"worst", certificate_to_json(m.worst, grid)},
                           {"certificates", certs}});
    }
    j["members"] = members;
    return j;
}

std::string slopes_csv(const std::vector<SlopeReport>& reps) {
    std::string out = "s,t,norm_q,norm_p,ratio,log_s,log_ratio\n";
    auto row = [&](const SlopeRecord& r) {
        out += shortest(r.s) + ',' + shortest(r.t) + ',' + shortest(r.norm_q) + ',' + shortest(r.norm_p) + ',' +
               shortest(r.ratio) + ',' + shortest(std::log(r.s)) + ',' +
               shortest(r.ratio > 0.0 ? std::log(r.ratio) : -HUGE_VAL) + '\n';
    };
    for (const auto& rep : reps) {
        for (const auto& r : rep.s_sweep) row(r);
        for (const auto& r : rep.t_sweep) row(r);
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << content;
    if (!os) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace hls
