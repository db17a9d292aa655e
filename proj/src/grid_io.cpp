#include "hls/grid_io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace hls {

namespace {

constexpr int kSchemaVersion = 1;

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

void write_grid_function(std::ostream& os, const GridFunction& f, GridEncoding encoding) {
    const ProductGrid& g = f.grid();
    nlohmann::json header = {
        {"schema", kSchemaVersion},
        {"m", g.m()},
        {"n", g.n()},
        {"L", g.half_width()},
        {"N", g.points_per_axis()},
        {"encoding", encoding == GridEncoding::csv ? "csv" : "f64le"},
    };
    os << header.dump() << '\n';
    const auto values = f.values();
    if (encoding == GridEncoding::csv) {
        const auto row = static_cast<std::size_t>(g.points_per_axis());
        for (std::size_t i = 0; i < values.size(); ++i) {
            os << format_double(values[i]);
            os << ((i + 1) % row == 0 ? '\n' : ',');
        }
        return;
    }
    static_assert(std::endian::native == std::endian::little, "binary encoding assumes little-endian host");
    os.write(reinterpret_cast<const char*>(values.data()),
             static_cast<std::streamsize>(values.size() * sizeof(double)));
}

GridFunction read_grid_function(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("missing grid header");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed grid header: ") + e.what());
    }
    if (header.value("schema", 0) != kSchemaVersion)
        throw std::runtime_error("unsupported grid schema version");
    const ProductGrid grid(header.at("m").get<int>(), header.at("n").get<int>(),
                           header.at("L").get<double>(), header.at("N").get<int>());
    const std::string encoding = header.at("encoding").get<std::string>();
    std::vector<double> values(grid.size());

    if (encoding == "f64le") {
        is.read(reinterpret_cast<char*>(values.data()),
                static_cast<std::streamsize>(values.size() * sizeof(double)));
        if (static_cast<std::size_t>(is.gcount()) != values.size() * sizeof(double))
            throw std::runtime_error("truncated binary grid payload");
        return GridFunction(grid, std::move(values));
    }
    if (encoding != "csv") throw std::runtime_error("unknown grid encoding '" + encoding + "'");

    std::size_t k = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const char* p = line.data();
        const char* end = p + line.size();
        while (p < end) {
            if (k >= values.size()) throw std::runtime_error("too many values in CSV payload");
            auto res = std::from_chars(p, end, values[k]);
            if (res.ec != std::errc()) throw std::runtime_error("bad number in CSV payload");
            ++k;
            p = res.ptr;
            if (p < end && *p == ',') ++p;
        }
    }
    if (k != values.size()) throw std::runtime_error("too few values in CSV payload");
    return GridFunction(grid, std::move(values));
}

void save_grid_function(const std::string& path, const GridFunction& f, GridEncoding encoding) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_grid_function(os, f, encoding);
}

GridFunction load_grid_function(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_grid_function(is);
}

}  // namespace hls
