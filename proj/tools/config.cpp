#include "config.hpp"

#include <boost/version.hpp>
#include <gmp.h>
#include <mpfr.h>
#include <Eigen/Core>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>

#include "nonpv/diffraction.hpp"
#include "nonpv/parallel.hpp"
#include "nonpv/simd/kernels.hpp"

namespace nonpv::cli {

namespace {

std::string trim(const std::string& s)
{
    auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

double parse_real(const std::string& raw, const char* what)
{
    std::string s = trim(raw);
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
        throw ConfigError(std::string("invalid ") + what + " '" + raw + "'");
    return v;
}

int parse_int(const std::string& raw, const char* what)
{
    std::string s = trim(raw);
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size())
        throw ConfigError(std::string("invalid ") + what + " '" + raw + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::size_t a = 0;
    while (true) {
        auto b = s.find(sep, a);
        out.push_back(s.substr(a, b == std::string::npos ? std::string::npos : b - a));
        if (b == std::string::npos) break;
        a = b + 1;
    }
    return out;
}

cplx parse_complex(const std::string& s)
{
    auto parts = split(s, ':');
    if (parts.size() == 1) return cplx(parse_real(parts[0], "weight"));
    if (parts.size() == 2) return cplx(parse_real(parts[0], "weight"), parse_real(parts[1], "weight"));
    throw ConfigError("invalid weight '" + s + "'");
}

}  // namespace

Weights parse_weights(const std::string& s)
{
    if (trim(s) == "balanced") return balanced_weights();
    auto parts = split(s, ',');
    if (parts.size() != 2) throw ConfigError("weights need two entries or 'balanced', got '" + s + "'");
    return Weights{parse_complex(parts[0]), parse_complex(parts[1])};
}

double parse_k(const std::string& s, std::string* how)
{
    const std::string t = trim(s);
    if (t.rfind("random:", 0) == 0) {
        std::uint64_t seed = 0;
        const std::string digits = t.substr(7);
        auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), seed);
        if (digits.empty() || ec != std::errc() || p != digits.data() + digits.size())
            throw ConfigError("invalid random seed in '" + s + "'");
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> d(0.0, 1.0);
        double k = d(rng);
        while (k == 0.0) k = d(rng);
        if (how) *how = "uniform (0,1), mt19937_64 seed " + digits;
        return k;
    }
    if (how) *how = "fixed";
    return parse_real(t, "k");
}

std::vector<double> parse_real_list(const std::string& s)
{
    std::vector<double> out;
    for (const auto& p : split(s, ',')) out.push_back(parse_real(p, "list entry"));
    return out;
}

std::vector<int> parse_levels(const std::string& s)
{
    std::vector<int> out;
    auto dots = s.find("..");
    if (dots != std::string::npos) {
        int a = parse_int(s.substr(0, dots), "level"), b = parse_int(s.substr(dots + 2), "level");
        if (b < a) throw ConfigError("empty level range '" + s + "'");
        for (int l = a; l <= b; ++l) out.push_back(l);
    } else {
        for (const auto& p : split(s, ',')) out.push_back(parse_int(p, "level"));
    }
    return out;
}

struct DataSink::Impl {
    std::ofstream file;
    bool to_stdout = true;
};

DataSink::DataSink(const RunContext& ctx) : impl_(new Impl)
{
    if (ctx.out != "-") {
        impl_->file.open(ctx.out, std::ios::binary);
        if (!impl_->file) {
            delete impl_;
            throw ConfigError("cannot open output file '" + ctx.out + "'");
        }
        impl_->to_stdout = false;
    }
}

DataSink::~DataSink() { delete impl_; }

std::ostream& DataSink::stream() { return impl_->to_stdout ? std::cout : impl_->file; }

void write_manifest(const RunContext& ctx, int exit_status, const nlohmann::json& extra)
{
    nlohmann::json m;
    m["command"] = ctx.command;
    m["config"] = ctx.params;
    m["config_file"] = ctx.config_file;
    m["seed"] = ctx.seed;
    m["threads"] = thread_count();
    m["output"] = ctx.out;
    m["exit_status"] = exit_status;
    m["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start).count();
    m["versions"] = {
        {"nonpv", NONPV_VERSION},
        {"kernels", simd::active_kernels().name},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
        {"boost", std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000) + "." +
                      std::to_string(BOOST_VERSION % 100)},
        {"gmp", gmp_version},
        {"mpfr", mpfr_get_version()},
        {"compiler", __VERSION__},
    };
    for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
    if (ctx.out == "-") {
        std::cerr << "manifest: " << m.dump() << '\n';
        return;
    }
    std::ofstream f(ctx.out + ".manifest.json");
    f << m.dump(2) << '\n';
}

}  // namespace nonpv::cli
