#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "hrf/analysis.hpp"

namespace hrf::cli {

using nlohmann::json;

enum ExitCode { kOk = 0, kFailure = 1, kParse = 2, kDegenerate = 3, kNonConvergence = 4 };

struct MapSpec {
    Field field = Field::Complex;
    // Coefficients from the highest degree down.
    std::vector<cplx> numerator;
    std::vector<cplx> denominator;

    HomogeneousLift lift() const;
    json to_json() const;
};

// Restricted grammar in one variable (z or w): + - * / ^, parentheses, i, implicit multiplication.
MapSpec parse_expression(const std::string& text, Field field);
// {"field": "R"|"C", "numerator": [...], "denominator": [...]}; entries are [re, im] or plain numbers.
MapSpec parse_map_json(const json& j, std::optional<Field> field);
// A file path, inline JSON or an expression.
MapSpec load_map(const std::string& spec, std::optional<Field> field);

// Parses text as JSON, reporting line and column on failure.
json parse_json_text(const std::string& text, const std::string& origin);

struct RunConfig {
    std::string command;
    std::string map;
    std::optional<Field> field;
    int order = kDefaultQuadratureOrder;
    double tol = 1e-8;
    std::uint64_t seed = 7;
    int n_max = 8;
    std::optional<std::array<double, 3>> at;
    std::optional<std::array<double, 3>> ball;
    std::string measure;
    std::string out;
    std::string csv;

    json to_json() const;
    static RunConfig from_json(const json& j);
    // Throws ParseError on invalid values or missing files.
    void validate() const;
};

Field parse_field(const std::string& tag);
std::array<double, 3> parse_triple(const std::string& text, const std::string& flag);

// Each command returns the JSON document; non-convergence is flagged through `exit_code`.
struct CommandResult {
    json document;
    int exit_code = kOk;
};

CommandResult run(const RunConfig& config);

CommandResult cmd_eval(const RunConfig& config);
CommandResult cmd_minimize(const RunConfig& config);
CommandResult cmd_asymptotics(const RunConfig& config);
CommandResult cmd_barycenter(const RunConfig& config);
CommandResult cmd_capacity(const RunConfig& config);
CommandResult cmd_degree1(const RunConfig& config);

// Throws Error naming the first non-finite number.
void require_finite(const json& j, const std::string& path = "$");

}  // namespace hrf::cli
