// Run configuration shared by the CLI subcommands.
#pragma once

#include <chrono>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nonpv/correlation.hpp"

namespace nonpv::cli {

/// Invalid user input; maps to exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunContext {
    std::string command;
    std::uint64_t seed = 20240611;
    unsigned threads = 0;
    std::string out = "-";
    std::string config_file;
    nlohmann::json params = nlohmann::json::object();
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

/// "balanced" or "a,b" with real entries or complex entries written re:im.
Weights parse_weights(const std::string& s);
/// A number, or random:SEED for a uniform draw in (0, 1).
double parse_k(const std::string& s, std::string* how = nullptr);
/// Comma separated reals.
std::vector<double> parse_real_list(const std::string& s);
/// "a..b" or a comma separated list.
std::vector<int> parse_levels(const std::string& s);

/// Opens the data sink named by ctx.out; "-" is standard output.
class DataSink {
public:
    explicit DataSink(const RunContext& ctx);
    ~DataSink();
    std::ostream& stream();
    DataSink(const DataSink&) = delete;
    DataSink& operator=(const DataSink&) = delete;

private:
    struct Impl;
    Impl* impl_;
};

/// Writes {config, versions, seed, wall time} next to the data, or to stderr for "-".
void write_manifest(const RunContext& ctx, int exit_status, const nlohmann::json& extra = nlohmann::json::object());

}  // namespace nonpv::cli
