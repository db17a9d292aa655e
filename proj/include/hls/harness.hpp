// Experiment orchestration: configuration, the pointwise certification
// campaign, norm-ratio checks, necessity (dilation) sweeps, the maximal
// operator benchmark, and report emission.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hls/families.hpp"
#include "hls/grid.hpp"
#include "hls/hedberg.hpp"
#include "hls/kernel.hpp"

namespace hls {

inline constexpr std::string_view kLibraryVersion = "1.0.0";
inline constexpr int kReportSchemaVersion = 1;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class KernelSampling { cell_centre, cell_average };

struct ExponentSpec {
    double alpha = 0.5;
    double beta = 0.5;
    double p = 4.0 / 3.0;
    std::optional<double> q;  // derived from 1/q = 1/p - alpha/m when absent

    [[nodiscard]] Exponents resolve(int m, int n) const;
};

struct Tolerances {
    double suite_constant = 0.0;    // pinned C in lhs <= C final_bound
    double norm_constant = 0.0;     // pinned A in ||f*Omega||_q <= A ||f||_p
    double stability_factor = 2.0;  // max/min across a dilation family
    double slope_tolerance = 0.05;
};

struct ExperimentConfig {
    int m = 1;
    int n = 1;
    double half_width = 8.0;
    int points_per_axis = 128;
    std::vector<ExponentSpec> exponents;
    std::vector<Family> families;
    double base_width = 1.0;
    int random_blocks = 8;
    std::vector<std::pair<double, double>> dilations;
    std::uint64_t seed = 1;
    int point_stride = 1;
    int certificate_stride = 8;  // emitted certificates: this sub-lattice, the argmax and any violation
    KernelSampling kernel_sampling = KernelSampling::cell_centre;
    Tolerances tolerances;
    int parallel = 1;

    [[nodiscard]] ProductGrid grid() const { return ProductGrid(m, n, half_width, points_per_axis); }
    [[nodiscard]] FamilySpec family_spec(Family f) const { return {f, base_width, seed, random_blocks}; }
};

/// Built-in defaults for `pointwise`, `necessity`, `normcheck` and
/// `bench-maximal`; throws ConfigError for an unknown name.
[[nodiscard]] ExperimentConfig default_config(std::string_view subcommand);
/// Overrides fields of `base` with the keys present in `j`.
[[nodiscard]] ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base);
[[nodiscard]] nlohmann::json config_to_json(const ExperimentConfig& cfg);
/// SHA-256 of the canonical JSON form of the configuration.
[[nodiscard]] std::string config_hash(const ExperimentConfig& cfg);

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Results must be
/// written to per-index slots so the outcome is independent of scheduling.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

// ---------------------------------------------------------------- pointwise

struct MemberResult {
    Family family = Family::gaussian;
    std::size_t exponent_index = 0;
    double s = 1.0;
    double t = 1.0;
    double max_ratio = 0.0;
    GridNode argmax{};
    std::size_t points = 0;
    std::size_t case1 = 0;
    std::size_t case2 = 0;
    std::vector<std::string> violations;
    HedbergCertificate worst;
    std::vector<HedbergCertificate> certificates;  // emitted subset, in point order
};

struct FamilyStability {
    Family family = Family::gaussian;
    std::size_t exponent_index = 0;
    double min_value = 0.0;
    double max_value = 0.0;
    [[nodiscard]] double spread() const noexcept { return min_value > 0.0 ? max_value / min_value : 1.0; }
};

struct PointwiseReport {
    std::vector<MemberResult> members;
    std::vector<FamilyStability> stability;
    std::vector<LatticeSlack> slacks;              // per exponent set
    std::vector<double> theoretical_constants;     // per exponent set
    double max_ratio = 0.0;
    double suite_constant = 0.0;
    double stability_factor = 2.0;

    [[nodiscard]] bool no_violations() const noexcept;
    [[nodiscard]] bool within_constant() const noexcept { return max_ratio <= suite_constant; }
    [[nodiscard]] bool stable() const noexcept;
    [[nodiscard]] bool pass() const noexcept { return no_violations() && within_constant() && stable(); }
};

/// Grid nodes visited by the campaign: every `stride`-th index on each axis.
[[nodiscard]] std::vector<GridNode> campaign_points(const ProductGrid& grid, int stride);

[[nodiscard]] PointwiseReport run_pointwise_campaign(const ExperimentConfig& cfg);

// ---------------------------------------------------------------- normcheck

struct NormRecord {
    Family family = Family::gaussian;
    std::size_t exponent_index = 0;
    double s = 1.0;
    double t = 1.0;
    double norm_q = 0.0;
    double norm_p = 0.0;
    double ratio = 0.0;
};

/// ||f * Omega||_q and ||f||_p for one member, with the configured kernel
/// sampling; the ratio is 0 for f == 0.
[[nodiscard]] NormRecord norm_ratio(const GridFunction& f, const Exponents& exps, KernelSampling sampling);

struct NormReport {
    std::vector<NormRecord> records;
    std::vector<FamilyStability> stability;
    double max_ratio = 0.0;
    double norm_constant = 0.0;
    double stability_factor = 2.0;

    [[nodiscard]] bool bounded() const noexcept { return max_ratio <= norm_constant; }
    [[nodiscard]] bool stable() const noexcept;
    [[nodiscard]] bool pass() const noexcept { return bounded() && stable(); }
};

[[nodiscard]] NormReport run_norm_check(const ExperimentConfig& cfg);

// ---------------------------------------------------------------- necessity

struct SlopeRecord {
    double s = 1.0;
    double t = 1.0;
    double norm_q = 0.0;
    double norm_p = 0.0;
    double ratio = 0.0;
};

struct SlopeReport {
    Exponents exponents;
    Family family = Family::gaussian;
    std::vector<SlopeRecord> s_sweep;  // t = 1
    std::vector<SlopeRecord> t_sweep;  // s = 1
    double slope_s = 0.0;
    double slope_t = 0.0;
    double theoretical_s = 0.0;  // m (1/p - 1/q) - alpha
    double theoretical_t = 0.0;  // n (1/p - 1/q) - beta
    double tolerance = 0.05;

    [[nodiscard]] bool pass_s() const noexcept;
    [[nodiscard]] bool pass_t() const noexcept;
    [[nodiscard]] bool pass() const noexcept { return pass_s() && pass_t(); }
};

/// Least-squares slope of ys against xs.
[[nodiscard]] double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys);

/// One sweep per configured exponent set, using the first configured family.
/// Throws ConfigError unless both ladders (t = 1 and s = 1) span a decade.
[[nodiscard]] std::vector<SlopeReport> run_necessity_sweep(const ExperimentConfig& cfg);

// ---------------------------------------------------------------- benchmark

struct BenchReport {
    int points_per_axis = 0;
    double naive_seconds = 0.0;
    double fast_seconds = 0.0;
    double max_deviation = 0.0;  // relative, fast vs naive
};

[[nodiscard]] BenchReport run_bench_maximal(const ExperimentConfig& cfg);

// ---------------------------------------------------------------- reports

[[nodiscard]] nlohmann::json certificate_to_json(const HedbergCertificate& c, const ProductGrid& grid);
[[nodiscard]] nlohmann::json report_header(const ExperimentConfig& cfg, std::string_view subcommand);
[[nodiscard]] nlohmann::json summary_json(const ExperimentConfig& cfg, const PointwiseReport& r);
[[nodiscard]] nlohmann::json summary_json(const ExperimentConfig& cfg, const NormReport& r);
[[nodiscard]] nlohmann::json summary_json(const ExperimentConfig& cfg, const std::vector<SlopeReport>& r);
[[nodiscard]] nlohmann::json summary_json(const ExperimentConfig& cfg, const BenchReport& r);
[[nodiscard]] nlohmann::json certificates_json(const ExperimentConfig& cfg, const PointwiseReport& r);
/// Columns s, t, norm_q, norm_p, ratio, log_s, log_ratio; the s-sweep rows
/// of every report precede its t-sweep rows.
[[nodiscard]] std::string slopes_csv(const std::vector<SlopeReport>& r);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace hls
