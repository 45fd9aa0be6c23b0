#pragma once

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fermat::cli {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Options {
    int degree = 3;
    int d_min = 3;
    int d_max = 3;
    std::string kind = "all";
    std::string arrangement = "B";
    std::string theorem = "main";
    std::optional<int> line_index;
    int osc_degree = 1;
    bool with_fermat = false;
    std::string out;
    int jobs = 1;
    std::uint64_t seed = 1;
    bool seed_given = false;
    long precision = 128;
    std::string format = "json";
};

// One command's outcome. status is "ok" iff failures is empty.
struct Report {
    std::string command;
    int degree = 0;
    std::optional<std::uint64_t> seed;
    nlohmann::json payload = nlohmann::json::object();
    std::vector<nlohmann::json> failures;

    bool ok() const { return failures.empty(); }
    void fail(const std::string& check, nlohmann::json expected, nlohmann::json actual);
    nlohmann::json to_json() const;
};

Report run_command(const std::string& command, const Options& opt);
Report run_all(int d_min, int d_max, const Options& opt);

std::string format_table(const Report& r);

// Parses argv, runs the subcommand and writes the report. Returns 0 when the
// report is ok, 1 on failed certificates, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace fermat::cli
