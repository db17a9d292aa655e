// hls: verification campaigns for the product-space fractional integral.
//
//   hls pointwise     --config c.json --out dir   certificates.json, summary.json
//   hls necessity     ...                          slopes.csv, summary.json
//   hls normcheck     ...                          summary.json
//   hls bench-maximal ...                          summary.json
//
// Exit status: 0 all checks pass, 1 a check failed, 2 bad configuration.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "hls/harness.hpp"

namespace {

struct Options {
    std::string config_path;
    std::string out_dir = "hls_out";
    std::optional<std::uint64_t> seed;
    std::optional<int> parallel;
};

hls::ExperimentConfig load_config(const std::string& subcommand, const Options& opt) {
    auto cfg = hls::default_config(subcommand);
    if (!opt.config_path.empty()) {
        std::ifstream is(opt.config_path);
        if (!is) throw hls::ConfigError("cannot read config file " + opt.config_path);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(is);
        } catch (const nlohmann::json::parse_error& e) {
            throw hls::ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        cfg = hls::config_from_json(j, cfg);
    }
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.parallel) {
        if (*opt.parallel < 1) throw hls::ConfigError("--parallel must be >= 1");
        cfg.parallel = *opt.parallel;
    }
    return cfg;
}

std::string out_path(const Options& opt, const char* name) {
    return (std::filesystem::path(opt.out_dir) / name).string();
}

void write_json(const Options& opt, const char* name, const nlohmann::json& j) {
    hls::write_text_file(out_path(opt, name), j.dump(2) + "\n");
}

int run(const std::string& sub, const Options& opt) {
    const auto cfg = load_config(sub, opt);
    std::filesystem::create_directories(opt.out_dir);
    const auto start = std::chrono::steady_clock::now();
    bool pass = false;

    if (sub == "pointwise") {
        const auto r = hls::run_pointwise_campaign(cfg);
        hls::write_text_file(out_path(opt, "certificates.json"), hls::certificates_json(cfg, r).dump() + "\n");
        write_json(opt, "summary.json", hls::summary_json(cfg, r));
        const hls::ProductGrid grid = cfg.grid();
        for (const auto& m : r.members)
            for (const auto& c : m.certificates)
                if (!c.valid()) std::cerr << "violation: " << hls::certificate_to_json(c, grid).dump() << "\n";
        for (const auto& s : r.stability)
            std::cout << hls::family_name(s.family) << " [" << s.exponent_index << "]  max ratio "
                      << s.max_value << "  spread " << s.spread() << "\n";
        std::cout << "max ratio " << r.max_ratio << " (suite constant " << r.suite_constant << ")\n";
        pass = r.pass();
    } else if (sub == "necessity") {
        const auto reps = hls::run_necessity_sweep(cfg);
        hls::write_text_file(out_path(opt, "slopes.csv"), hls::slopes_csv(reps));
        write_json(opt, "summary.json", hls::summary_json(cfg, reps));
        pass = true;
        for (const auto& r : reps) {
            std::cout << "alpha=" << r.exponents.alpha << " beta=" << r.exponents.beta << " p=" << r.exponents.p
                      << " q=" << r.exponents.q << "  slope_s " << r.slope_s << " (expect " << r.theoretical_s
                      << ")  slope_t " << r.slope_t << " (expect " << r.theoretical_t << ")\n";
            pass = pass && r.pass();
        }
    } else if (sub == "normcheck") {
        const auto r = hls::run_norm_check(cfg);
        write_json(opt, "summary.json", hls::summary_json(cfg, r));
        for (const auto& s : r.stability)
            std::cout << hls::family_name(s.family) << " [" << s.exponent_index << "]  ratio " << s.min_value
                      << " .. " << s.max_value << "\n";
        std::cout << "max ratio " << r.max_ratio << " (norm constant " << r.norm_constant << ")\n";
        pass = r.pass();
    } else {
        const auto r = hls::run_bench_maximal(cfg);
        const auto j = hls::summary_json(cfg, r);
        write_json(opt, "summary.json", j);
        std::cout << "N=" << r.points_per_axis << "  naive " << r.naive_seconds << " s  fast " << r.fast_seconds
                  << " s  deviation " << r.max_deviation << "\n";
        pass = j.at("pass").get<bool>();
    }

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << sub << ": " << (pass ? "PASS" : "FAIL") << " in " << secs << " s\n";
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hardy-Littlewood-Sobolev verification on product grids"};
    app.set_version_flag("--version", std::string(hls::kLibraryVersion));
    app.require_subcommand(1);
    Options opt;
    for (const char* name : {"pointwise", "necessity", "normcheck", "bench-maximal"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", opt.config_path, "JSON configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--seed", opt.seed, "seed for the random family");
        sub->add_option("--parallel", opt.parallel, "worker threads");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        return run(sub, opt);
    } catch (const hls::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
